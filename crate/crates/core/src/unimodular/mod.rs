//! Vector systems over `Q`, unimodularity and total unimodularity, network
//! matrices and the complete bipartite construction.

mod network;
mod system;
mod tu;
mod witness;

pub use network::{bipartite_construction, network_matrix, NetworkInstance};
pub use system::{
    disjoint_sum, is_maximal_circuit, is_unimodular_system, maximal_circuit, tensor_product,
    BasisPair, UnimodularCheck, UnimodularReport, VectorSystem, DEFAULT_SUBSET_BUDGET,
};
pub use tu::{augment_identity, is_totally_unimodular, TuConfig, TuMode, TuReport, TuWitness};
pub use witness::{basis_abs_det, find_nonunimodular_witness, DEFAULT_WITNESS_BUDGET};

pub(crate) use system::serialize_rational;
