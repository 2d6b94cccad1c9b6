use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::system::{binomial, next_combination, serialize_rational};
use crate::linalg::{det_integer, det_small, RationalMatrix};

/// Limits for [`is_totally_unimodular`].
///
/// Every square submatrix is checked when `rows * cols <= max_exhaustive_cells`
/// and `min(rows, cols) <= max_exhaustive_min_dim`; otherwise `samples` random
/// square submatrices are drawn from a generator seeded with `seed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuConfig {
    pub max_exhaustive_cells: usize,
    pub max_exhaustive_min_dim: usize,
    pub samples: u64,
    pub seed: u64,
}

impl Default for TuConfig {
    fn default() -> Self {
        TuConfig {
            max_exhaustive_cells: 36,
            max_exhaustive_min_dim: 6,
            samples: 20_000,
            seed: 0,
        }
    }
}

impl TuConfig {
    /// Always enumerate every square submatrix, whatever the size.
    pub fn exhaustive() -> Self {
        TuConfig {
            max_exhaustive_cells: usize::MAX,
            max_exhaustive_min_dim: usize::MAX,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum TuMode {
    Exhaustive,
    /// `coverage` is the fraction of all square submatrices that were drawn
    /// (with repetition, so it is an upper bound on distinct coverage).
    Sampled { samples: u64, coverage: f64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TuWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    #[serde(serialize_with = "serialize_rational")]
    pub det: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TuReport {
    pub totally_unimodular: bool,
    pub mode: TuMode,
    pub submatrices_checked: u64,
    pub witness: Option<TuWitness>,
}

/// Checks that every square submatrix has determinant `1`, `0` or `-1`.
///
/// Entries are examined first (the `1 x 1` minors); once they are all in
/// `{-1, 0, 1}` larger minors are enumerated by size, then row subset, then
/// column subset, all in lexicographic order, so the reported witness is
/// deterministic. In sampled mode a `false` answer is conclusive and a `true`
/// answer only means no violation was drawn.
pub fn is_totally_unimodular(m: &RationalMatrix, cfg: &TuConfig) -> TuReport {
    let (r, c) = (m.rows(), m.cols());
    let exhaustive = r * c <= cfg.max_exhaustive_cells && r.min(c) <= cfg.max_exhaustive_min_dim;
    let mode = if exhaustive {
        TuMode::Exhaustive
    } else {
        let total: f64 = (1..=r.min(c))
            .map(|k| binomial(r, k) as f64 * binomial(c, k) as f64)
            .sum();
        TuMode::Sampled {
            samples: cfg.samples,
            coverage: (cfg.samples as f64 / total).min(1.0),
        }
    };

    let mut checked = 0u64;
    let mut small = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            checked += 1;
            let v = m.get(i, j);
            if v.abs() > BigRational::one() || !v.is_integer() {
                return TuReport {
                    totally_unimodular: false,
                    mode,
                    submatrices_checked: checked,
                    witness: Some(TuWitness {
                        rows: vec![i],
                        cols: vec![j],
                        det: v.clone(),
                    }),
                };
            }
            small.push(v.to_integer().to_i64().unwrap() as i128);
        }
    }

    let minor = |rows: &[usize], cols: &[usize]| -> BigInt {
        let k = rows.len();
        let mut a = Vec::with_capacity(k * k);
        for &i in rows {
            for &j in cols {
                a.push(small[i * c + j]);
            }
        }
        match det_small(a.clone(), k) {
            Some(d) => BigInt::from(d),
            None => det_integer(a.chunks(k).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()),
        }
    };
    let fail = |rows: Vec<usize>, cols: Vec<usize>, d: BigInt, checked: u64, mode: TuMode| TuReport {
        totally_unimodular: false,
        mode,
        submatrices_checked: checked,
        witness: Some(TuWitness {
            rows,
            cols,
            det: BigRational::from_integer(d),
        }),
    };

    if exhaustive {
        for k in 2..=r.min(c) {
            let mut rows: Vec<usize> = (0..k).collect();
            loop {
                let mut cols: Vec<usize> = (0..k).collect();
                loop {
                    checked += 1;
                    let d = minor(&rows, &cols);
                    if d.abs() > BigInt::one() {
                        return fail(rows, cols, d, checked, mode);
                    }
                    if !next_combination(&mut cols, c) {
                        break;
                    }
                }
                if !next_combination(&mut rows, r) {
                    break;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let kmax = r.min(c);
        for _ in 0..cfg.samples {
            if kmax < 2 {
                break;
            }
            let k = rng.random_range(2..=kmax);
            let mut rows = sample(&mut rng, r, k).into_vec();
            let mut cols = sample(&mut rng, c, k).into_vec();
            rows.sort_unstable();
            cols.sort_unstable();
            checked += 1;
            let d = minor(&rows, &cols);
            if d.abs() > BigInt::one() {
                return fail(rows, cols, d, checked, mode);
            }
        }
    }
    TuReport {
        totally_unimodular: true,
        mode,
        submatrices_checked: checked,
        witness: None,
    }
}

/// `[A | I_m]` for an `m x n` matrix `A`.
pub fn augment_identity(a: &RationalMatrix) -> RationalMatrix {
    a.hconcat(&RationalMatrix::identity(a.rows()))
        .expect("identity has matching row count")
}
