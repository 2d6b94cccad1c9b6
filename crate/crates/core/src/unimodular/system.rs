use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det_integer, det_small, rank_of_rows, RationalMatrix};

/// A finite list of nonzero vectors spanning `Q^m`.
///
/// Duplicates are allowed and order is significant; set-level comparisons go
/// through [`VectorSystem::same_multiset`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorSystem {
    dim: usize,
    vectors: Vec<Vec<BigRational>>,
}

impl VectorSystem {
    pub fn new(dim: usize, vectors: Vec<Vec<BigRational>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::TooSmall {
                what: "ambient dimension",
                min: 1,
                got: 0,
            });
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().all(Zero::is_zero) {
                return Err(Error::ZeroVector(i));
            }
        }
        let rank = rank_of_rows(vectors.clone());
        if rank != dim {
            return Err(Error::NotSpanning { rank, dim });
        }
        Ok(VectorSystem { dim, vectors })
    }

    /// Skips the span check; callers guarantee the invariants by construction.
    pub(crate) fn new_unchecked(dim: usize, vectors: Vec<Vec<BigRational>>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == dim));
        VectorSystem { dim, vectors }
    }

    pub fn from_integer_vectors(dim: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            dim,
            vectors
                .iter()
                .map(|v| v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    /// The columns of `m`.
    pub fn from_matrix_columns(m: &RationalMatrix) -> Result<Self> {
        Self::new(m.rows(), (0..m.cols()).map(|j| m.column(j)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<BigRational>] {
        &self.vectors
    }

    /// Matrix with the vectors as columns.
    pub fn to_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(&self.vectors, self.dim).expect("lengths checked")
    }

    pub fn sum(&self) -> Vec<BigRational> {
        let mut acc = vec![BigRational::zero(); self.dim];
        for v in &self.vectors {
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x;
            }
        }
        acc
    }

    pub fn same_multiset(&self, other: &VectorSystem) -> bool {
        if self.dim != other.dim || self.len() != other.len() {
            return false;
        }
        let mut a = self.vectors.clone();
        let mut b = other.vectors.clone();
        a.sort();
        b.sort();
        a == b
    }

    /// Image under the linear map `m` (a `target_dim x dim` matrix).
    pub fn map_linear(&self, m: &RationalMatrix) -> Result<VectorSystem> {
        let images = self
            .vectors
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        VectorSystem::new(m.rows(), images)
    }

    pub fn subsystem_matrix(&self, indices: &[usize]) -> RationalMatrix {
        let cols: Vec<Vec<BigRational>> = indices.iter().map(|&i| self.vectors[i].clone()).collect();
        RationalMatrix::from_columns(&cols, self.dim).expect("lengths checked")
    }

    /// Coordinate rows (`dim x len`) scaled to integers, each row by the lcm
    /// of its denominators, plus the product of those scale factors. Every
    /// `dim`-subset determinant is scaled by the same factor.
    pub(crate) fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut total = BigInt::one();
        let rows = (0..self.dim)
            .map(|r| {
                let l = self
                    .vectors
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v[r].denom()));
                total *= &l;
                self.vectors
                    .iter()
                    .map(|v| (&v[r] * &l).to_integer())
                    .collect()
            })
            .collect();
        (rows, total)
    }
}

/// Standard maximal circuit of `Q^dim`: the unit vectors followed by the
/// negative of their sum.
pub fn maximal_circuit(dim: usize) -> Result<VectorSystem> {
    if dim == 0 {
        return Err(Error::TooSmall {
            what: "dimension",
            min: 1,
            got: 0,
        });
    }
    let mut vectors: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| {
            let mut v = vec![BigRational::zero(); dim];
            v[i] = BigRational::one();
            v
        })
        .collect();
    vectors.push(vec![-BigRational::one(); dim]);
    Ok(VectorSystem::new_unchecked(dim, vectors))
}

/// `|X| = dim + 1`, `X` spans, and `sum(X) = 0`. Spanning is a
/// [`VectorSystem`] invariant, so only the other two are tested here.
pub fn is_maximal_circuit(x: &VectorSystem) -> bool {
    x.len() == x.ambient_dim() + 1 && x.sum().iter().all(Zero::is_zero)
}

/// `{x ⊗ y}` in `X`-major order: `x_0 ⊗ y_0, x_0 ⊗ y_1, ..., x_1 ⊗ y_0, ...`.
/// Coordinates of `x ⊗ y` follow the Kronecker convention (index `i * n + j`).
pub fn tensor_product(x: &VectorSystem, y: &VectorSystem) -> VectorSystem {
    let dim = x.dim * y.dim;
    let mut vectors = Vec::with_capacity(x.len() * y.len());
    for u in &x.vectors {
        for v in &y.vectors {
            let mut w = Vec::with_capacity(dim);
            for a in u {
                for b in v {
                    w.push(a * b);
                }
            }
            vectors.push(w);
        }
    }
    VectorSystem::new_unchecked(dim, vectors)
}

/// `X ⊔ Y` in `Q^(m+n)`: `(x, 0)` for each `x`, then `(0, y)` for each `y`.
pub fn disjoint_sum(x: &VectorSystem, y: &VectorSystem) -> VectorSystem {
    let dim = x.dim + y.dim;
    let mut vectors = Vec::with_capacity(x.len() + y.len());
    for u in &x.vectors {
        let mut w = u.clone();
        w.resize(dim, BigRational::zero());
        vectors.push(w);
    }
    for v in &y.vectors {
        let mut w = vec![BigRational::zero(); x.dim];
        w.extend(v.iter().cloned());
        vectors.push(w);
    }
    VectorSystem::new_unchecked(dim, vectors)
}

/// Two bases drawn from one system whose determinants differ in absolute value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisPair {
    pub first: Vec<usize>,
    #[serde(serialize_with = "serialize_rational")]
    pub first_abs_det: BigRational,
    pub second: Vec<usize>,
    #[serde(serialize_with = "serialize_rational")]
    pub second_abs_det: BigRational,
}

pub(crate) fn serialize_rational<S: serde::Serializer>(
    v: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Result of an exhaustive basis enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularReport {
    pub unimodular: bool,
    /// `|det|` of the lexicographically first basis.
    pub abs_det: BigRational,
    pub bases: u64,
    pub singular: u64,
    /// Lexicographically first basis together with the first basis whose
    /// `|det|` differs from it.
    pub witness: Option<BasisPair>,
    /// Number of bases per absolute determinant value.
    pub abs_det_counts: BTreeMap<BigRational, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnimodularCheck {
    Complete(UnimodularReport),
    /// `binomial(len, dim)` subsets would have to be examined, more than the budget.
    BudgetExceeded { subsets: u128, budget: u64 },
}

impl UnimodularCheck {
    /// `None` when the budget was exceeded.
    pub fn verdict(&self) -> Option<bool> {
        match self {
            UnimodularCheck::Complete(r) => Some(r.unimodular),
            UnimodularCheck::BudgetExceeded { .. } => None,
        }
    }

    pub fn report(&self) -> Option<&UnimodularReport> {
        match self {
            UnimodularCheck::Complete(r) => Some(r),
            UnimodularCheck::BudgetExceeded { .. } => None,
        }
    }
}

pub const DEFAULT_SUBSET_BUDGET: u64 = 5_000_000;

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i + 1) as u128
    })
}

/// Advances `c` to the next `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

const BATCH: usize = 4096;

/// Enumerates every `dim`-subset of `x` in lexicographic order and compares
/// the absolute determinants of those that are bases.
///
/// Determinants are compared up to sign. Singular subsets are counted, not
/// treated as errors. When `binomial(len, dim)` exceeds `budget` nothing is
/// enumerated and [`UnimodularCheck::BudgetExceeded`] is returned.
pub fn is_unimodular_system(x: &VectorSystem, budget: u64) -> UnimodularCheck {
    let m = x.dim;
    let k = x.len();
    let subsets = binomial(k, m);
    if subsets > budget as u128 {
        return UnimodularCheck::BudgetExceeded { subsets, budget };
    }
    let (rows, scale) = x.integer_rows();
    let small: Option<Vec<i64>> = rows
        .iter()
        .flat_map(|r| r.iter().map(|v| v.to_i64()))
        .collect();
    let det_of = |subset: &[usize]| -> BigInt {
        if let Some(s) = &small {
            let mut a = Vec::with_capacity(m * m);
            for r in 0..m {
                for &c in subset {
                    a.push(s[r * k + c] as i128);
                }
            }
            if let Some(d) = det_small(a, m) {
                return BigInt::from(d);
            }
        }
        det_integer(
            (0..m)
                .map(|r| subset.iter().map(|&c| rows[r][c].clone()).collect())
                .collect(),
        )
    };

    let mut reference: Option<(Vec<usize>, BigInt)> = None;
    let mut witness: Option<(Vec<usize>, BigInt)> = None;
    let mut bases = 0u64;
    let mut singular = 0u64;
    let mut counts: BTreeMap<BigInt, u64> = BTreeMap::new();

    let mut comb: Vec<usize> = (0..m).collect();
    let mut more = m <= k;
    while more {
        let mut batch = Vec::with_capacity(BATCH);
        while more && batch.len() < BATCH {
            batch.push(comb.clone());
            more = next_combination(&mut comb, k);
        }
        let dets: Vec<BigInt> = batch.par_iter().map(|s| det_of(s).abs()).collect();
        for (subset, d) in batch.into_iter().zip(dets) {
            if d.is_zero() {
                singular += 1;
                continue;
            }
            bases += 1;
            *counts.entry(d.clone()).or_insert(0) += 1;
            match &reference {
                None => reference = Some((subset, d)),
                Some((_, a)) if *a != d && witness.is_none() => witness = Some((subset, d)),
                _ => {}
            }
        }
    }

    let to_q = |d: BigInt| BigRational::new(d, scale.clone());
    let (first, a) = reference.expect("a spanning system contains a basis");
    let abs_det = to_q(a.clone());
    let witness = witness.map(|(second, d)| BasisPair {
        first: first.clone(),
        first_abs_det: abs_det.clone(),
        second,
        second_abs_det: to_q(d),
    });
    UnimodularCheck::Complete(UnimodularReport {
        unimodular: witness.is_none(),
        abs_det,
        bases,
        singular,
        witness,
        abs_det_counts: counts.into_iter().map(|(d, c)| (to_q(d), c)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det_exact;

    fn sys(dim: usize, v: &[&[i64]]) -> VectorSystem {
        let owned: Vec<Vec<i64>> = v.iter().map(|x| x.to_vec()).collect();
        VectorSystem::from_integer_vectors(dim, &owned).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(
            VectorSystem::from_integer_vectors(2, &[vec![1, 0], vec![0, 0], vec![0, 1]]),
            Err(Error::ZeroVector(1))
        ));
        assert!(matches!(
            VectorSystem::from_integer_vectors(2, &[vec![1, 1], vec![2, 2]]),
            Err(Error::NotSpanning { rank: 1, dim: 2 })
        ));
        assert!(VectorSystem::from_integer_vectors(2, &[vec![1]]).is_err());
    }

    #[test]
    fn maximal_circuit_examples() {
        assert_eq!(maximal_circuit(1).unwrap(), sys(1, &[&[1], &[-1]]));
        assert_eq!(
            maximal_circuit(2).unwrap(),
            sys(2, &[&[1, 0], &[0, 1], &[-1, -1]])
        );
        let c3 = maximal_circuit(3).unwrap();
        assert_eq!(c3.len(), 4);
        assert!(c3.sum().iter().all(Zero::is_zero));
        assert!(maximal_circuit(0).is_err());
        for d in 1..=6 {
            assert!(is_maximal_circuit(&maximal_circuit(d).unwrap()));
        }
        assert!(!is_maximal_circuit(&sys(2, &[&[1, 0], &[0, 1]])));
        assert!(!is_maximal_circuit(&sys(2, &[&[1, 0], &[0, 1], &[1, 1]])));
    }

    #[test]
    fn unimodular_examples() {
        let c = maximal_circuit(2).unwrap();
        let r = is_unimodular_system(&c, 1000);
        let rep = r.report().unwrap();
        assert!(rep.unimodular);
        assert_eq!(rep.abs_det, q(1));
        assert_eq!((rep.bases, rep.singular), (3, 0));

        let bad = sys(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]);
        let rep = is_unimodular_system(&bad, 1000).report().cloned().unwrap();
        assert!(!rep.unimodular);
        let w = rep.witness.unwrap();
        assert_eq!(w.first, vec![0, 1]);
        assert_eq!(w.second, vec![2, 3]);
        assert_eq!(w.second_abs_det, q(2));

        let cc = tensor_product(&c, &c);
        assert_eq!(cc.len(), 9);
        let rep = is_unimodular_system(&cc, 1000).report().cloned().unwrap();
        assert!(rep.unimodular);
        assert_eq!(rep.bases + rep.singular, 126);
    }

    #[test]
    fn budget_is_explicit() {
        let c = tensor_product(&maximal_circuit(3).unwrap(), &maximal_circuit(3).unwrap());
        assert_eq!(
            is_unimodular_system(&c, 10),
            UnimodularCheck::BudgetExceeded {
                subsets: 11440,
                budget: 10
            }
        );
    }

    #[test]
    fn rational_scaling_preserves_dets() {
        let half = BigRational::new(1.into(), 2.into());
        let x = VectorSystem::new(
            2,
            vec![
                vec![half.clone(), q(0)],
                vec![q(0), q(1)],
                vec![half.clone(), q(1)],
            ],
        )
        .unwrap();
        let rep = is_unimodular_system(&x, 100).report().cloned().unwrap();
        assert!(rep.unimodular);
        assert_eq!(rep.abs_det, half);
        assert_eq!(
            det_exact(&x.subsystem_matrix(&[0, 2])).unwrap(),
            half
        );
    }

    #[test]
    fn tensor_with_signs() {
        let pm = maximal_circuit(1).unwrap();
        let y = maximal_circuit(2).unwrap();
        let t = tensor_product(&pm, &y);
        let negated: Vec<Vec<BigRational>> = y
            .vectors()
            .iter()
            .map(|v| v.iter().map(|x| -x).collect())
            .collect();
        let mut expect = y.vectors().to_vec();
        expect.extend(negated);
        assert_eq!(t.vectors(), &expect[..]);
    }

    #[test]
    fn tensor_of_unit_vectors_is_standard_basis() {
        let e = sys(2, &[&[1, 0], &[0, 1]]);
        let f = sys(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(tensor_product(&e, &f).to_matrix(), RationalMatrix::identity(6));
        assert_eq!(tensor_product(&maximal_circuit(2).unwrap(), &maximal_circuit(3).unwrap()).len(), 12);
    }

    #[test]
    fn disjoint_sum_shape() {
        let c = maximal_circuit(1).unwrap();
        let s = disjoint_sum(&c, &c);
        assert_eq!((s.ambient_dim(), s.len()), (2, 4));
        assert!(VectorSystem::new(2, s.vectors().to_vec()).is_ok());
    }

    #[test]
    fn combinations_lexicographic() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(binomial(105, 48) > u64::MAX as u128, true);
    }
}
