use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::system::{BasisPair, VectorSystem};
use crate::linalg::{det_exact, rank_of_rows, RationalMatrix};

/// Exchange budget used by the CLI and the acceptance suite.
pub const DEFAULT_WITNESS_BUDGET: u64 = 10_000;

/// Looks for two bases of `x` whose determinants differ in absolute value.
///
/// Starts from a greedy basis over a seeded shuffle of `x`, then walks the
/// basis-exchange graph. With `T = B^-1 X`, exchanging basis vector `r` for
/// `x_c` multiplies the determinant by `T[r][c]`, so any tableau entry outside
/// `{-1, 0, 1}` yields a witness immediately. Otherwise a random exchange is
/// made and the tableau updated; `budget` bounds the number of exchanges.
///
/// Deterministic for a given `seed`. `None` means nothing was found within the
/// budget, not that `x` is unimodular.
pub fn find_nonunimodular_witness(x: &VectorSystem, budget: u64, seed: u64) -> Option<BasisPair> {
    let m = x.ambient_dim();
    let k = x.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(&mut rng);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut chosen: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for &i in &order {
        chosen.push(x.vectors()[i].clone());
        if rank_of_rows(chosen.clone()) == chosen.len() {
            basis.push(i);
            if basis.len() == m {
                break;
            }
        } else {
            chosen.pop();
        }
    }

    let xm = x.to_matrix();
    let bm = x.subsystem_matrix(&basis);
    let t = bm
        .solve(&xm)
        .expect("square")
        .expect("greedy basis is nonsingular");

    let witness = |basis: &[usize], r: usize, c: usize| -> BasisPair {
        let mut other = basis.to_vec();
        other[r] = c;
        let mut first = basis.to_vec();
        first.sort_unstable();
        other.sort_unstable();
        let abs_det = |b: &[usize]| det_exact(&x.subsystem_matrix(b)).expect("square").abs();
        BasisPair {
            first_abs_det: abs_det(&first),
            second_abs_det: abs_det(&other),
            first,
            second: other,
        }
    };

    for r in 0..m {
        for c in 0..k {
            let v = t.get(r, c);
            if !v.is_zero() && v.abs() != BigRational::one() {
                return Some(witness(&basis, r, c));
            }
        }
    }

    // every entry is now 0 or ±1, and stays within ±2 under ±1 pivots
    let mut tab: Vec<i64> = t.entries().iter().map(|v| v.to_integer().to_i64().unwrap()).collect();
    let mut in_basis = vec![false; k];
    for &b in &basis {
        in_basis[b] = true;
    }
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for _ in 0..budget {
        candidates.clear();
        for r in 0..m {
            for c in 0..k {
                if !in_basis[c] && tab[r * k + c] != 0 {
                    candidates.push((r, c));
                }
            }
        }
        let &(r, c) = candidates.choose(&mut rng)?;
        let p = tab[r * k + c];
        for j in 0..k {
            tab[r * k + j] *= p;
        }
        let pivot_row: Vec<i64> = tab[r * k..(r + 1) * k].to_vec();
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = tab[i * k + c];
            if f == 0 {
                continue;
            }
            for j in 0..k {
                tab[i * k + j] -= f * pivot_row[j];
            }
        }
        in_basis[basis[r]] = false;
        in_basis[c] = true;
        basis[r] = c;
        for i in 0..m {
            for j in 0..k {
                if tab[i * k + j].abs() > 1 {
                    return Some(witness(&basis, i, j));
                }
            }
        }
    }
    None
}

/// `|det|` of the `dim`-subset `basis` of `x`.
pub fn basis_abs_det(x: &VectorSystem, basis: &[usize]) -> BigRational {
    let sub: RationalMatrix = x.subsystem_matrix(basis);
    det_exact(&sub).expect("square").abs()
}
