//! Exact evaluation of Schur polynomials at all primitive n-th roots of unity,
//! together with the unimodular-system machinery that explains why those
//! values are `1`, `0` or `-1` when `n` has at most two distinct odd prime
//! factors.
//!
//! Everything is exact: integers are arbitrary precision, rationals are
//! reduced fractions, and the cyclotomic field `Q(zeta_n)` is represented in
//! its power basis. Nothing is evaluated in floating point.

pub mod cyclotomic;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod reduction;
pub mod symfunc;
pub mod unimodular;

pub use cyclotomic::{
    cyclotomic_poly, euler_phi, inverse_cyclotomic_series, primitive_exponents, CycloElement,
    CyclotomicField,
};
pub use error::{Error, Result};
pub use linalg::{det_exact, RationalMatrix};
pub use poly::IntPolynomial;
pub use reduction::{
    condition_star, coprime_split, factor_shape, prime_power_split, verify_theorem, z_n_system,
    VerdictReport, VerifyOptions,
};
pub use symfunc::{
    alternant_at_roots, complete_at_roots, elementary_at_roots, partitions_in_box, scan_box,
    schur_at_roots, schur_at_roots_bialternant, Composition, Partition, ScanSummary,
};
pub use unimodular::{
    augment_identity, bipartite_construction, find_nonunimodular_witness, is_totally_unimodular,
    is_unimodular_system, maximal_circuit, network_matrix, tensor_product, NetworkInstance,
    TuConfig, VectorSystem,
};
