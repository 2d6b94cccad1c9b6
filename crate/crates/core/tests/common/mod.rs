//! Independent reference computations for the integration tests. None of these
//! call into the library's arithmetic.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn primitive_residues(n: u64) -> Vec<u64> {
    (1..=n).filter(|&k| gcd(k, n) == 1).collect()
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by `x^d - 1`.
fn div_x_pow_minus_one(a: &[i128], d: usize) -> Vec<i128> {
    let mut rem = a.to_vec();
    let deg = a.len() - 1;
    let mut q = vec![0; deg - d + 1];
    for i in (d..=deg).rev() {
        let c = rem[i];
        q[i - d] = c;
        rem[i] = 0;
        rem[i - d] += c;
    }
    assert!(rem.iter().all(|&r| r == 0), "inexact division");
    q
}

/// `Phi_n = prod_{d | n} (x^d - 1)^mu(n / d)`, ascending coefficients.
pub fn cyclotomic_mobius(n: u64) -> Vec<i128> {
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut num = vec![1i128];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            let mut f = vec![0i128; d as usize + 1];
            f[0] = -1;
            f[d as usize] = 1;
            num = poly_mul(&num, &f);
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            num = div_x_pow_minus_one(&num, d as usize);
        }
    }
    num
}

/// `e_k` at the primitive n-th roots, read off `prod (x - w) = Phi_n`.
pub fn elementary_oracle(n: u64, k: usize) -> i128 {
    let phi = cyclotomic_mobius(n);
    let d = phi.len() - 1;
    if k > d {
        return 0;
    }
    let sign = if k % 2 == 0 { 1 } else { -1 };
    sign * phi[d - k]
}

fn complex_det(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
            .unwrap();
        if a[p][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
        }
    }
    det
}

/// `s_λ` at the primitive n-th roots in floating point via the bialternant,
/// rounded; panics if the quotient is not close to a real integer.
pub fn schur_numeric(n: u64, parts: &[usize]) -> i64 {
    let roots: Vec<Complex64> = primitive_residues(n)
        .into_iter()
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect();
    let d = roots.len();
    let exps = |extra: &dyn Fn(usize) -> usize| -> Vec<Vec<Complex64>> {
        (0..d)
            .map(|i| {
                let e = extra(i) + d - 1 - i;
                roots.iter().map(|w| w.powu(e as u32)).collect()
            })
            .collect()
    };
    let num = complex_det(exps(&|i| parts.get(i).copied().unwrap_or(0)));
    let den = complex_det(exps(&|_| 0));
    let q = num / den;
    let r = q.re.round();
    assert!(
        (q.re - r).abs() < 1e-6 && q.im.abs() < 1e-6,
        "non-integral numeric value {q} for n = {n}, λ = {parts:?}"
    );
    r as i64
}

/// Gaussian elimination with partial pivoting in `f64`.
pub fn det_float(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
        }
    }
    det
}

/// Plain cofactor expansion along the first row.
pub fn det_cofactor(a: &[Vec<i64>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0i128;
    for j in 0..n {
        if a[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = a[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * a[0][j] as i128 * det_cofactor(&minor);
    }
    total
}

/// A partition with at most `max_len` parts, each at most `max_part`.
pub fn random_partition(rng: &mut ChaCha8Rng, max_len: usize, max_part: usize) -> Vec<usize> {
    if max_part == 0 {
        return Vec::new();
    }
    let len = rng.random_range(0..=max_len);
    let mut parts: Vec<usize> = (0..len).map(|_| rng.random_range(1..=max_part)).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// An `rows x cols` matrix with entries in `{-1, 0, 1}`, zero with probability 1/2.
pub fn random_signed(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| match rng.random_range(0..4) {
                    0 => 1,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}
