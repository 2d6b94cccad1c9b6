//! Cyclotomic polynomials, the power series of their inverses, and exact
//! arithmetic in the cyclotomic field `Q(zeta_n)`.
//!
//! `Phi_n` is computed by the divisor chain: `x^n - 1` is divided exactly by
//! `Phi_d` for every proper divisor `d` of `n`. Polynomials and fields are
//! memoized per conductor behind a read-mostly cache; filling it is idempotent,
//! so concurrent first requests at worst compute the same value twice.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::solve_integer;
use crate::poly::IntPolynomial;

/// Euler's totient.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroConductor);
    }
    let mut result = n;
    for (p, _) in factorize(n) {
        result = result / p * (p - 1);
    }
    Ok(result)
}

/// Prime factorization by trial division, ascending primes with exponents.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Exponents `a` in `[0, n)` with `gcd(a, n) = 1`, ascending. The primitive
/// n-th roots of unity are exactly `zeta_n^a` for these `a`.
pub fn primitive_exponents(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::ZeroConductor);
    }
    Ok((0..n).filter(|a| a.gcd(&n) == 1).collect())
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

static POLY_CACHE: LazyLock<RwLock<HashMap<u64, Arc<IntPolynomial>>>> =
    LazyLock::new(Default::default);

/// The n-th cyclotomic polynomial `Phi_n`, monic of degree `phi(n)`.
pub fn cyclotomic_poly(n: u64) -> Result<IntPolynomial> {
    cyclotomic_poly_shared(n).map(|p| (*p).clone())
}

pub(crate) fn cyclotomic_poly_shared(n: u64) -> Result<Arc<IntPolynomial>> {
    if n == 0 {
        return Err(Error::ZeroConductor);
    }
    if let Some(p) = POLY_CACHE.read().unwrap().get(&n) {
        return Ok(p.clone());
    }
    let mut quotient = IntPolynomial::x_pow_minus_one(n as usize);
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        let phi_d = cyclotomic_poly_shared(d)?;
        quotient = quotient
            .exact_div(&phi_d)
            .expect("x^n - 1 must be divisible by Phi_d for every divisor d");
    }
    let p = Arc::new(quotient);
    POLY_CACHE.write().unwrap().entry(n).or_insert_with(|| p.clone());
    Ok(p)
}

/// Coefficients `0..=terms_through` of the formal power series `1 / Phi_n(x)`.
///
/// For `n >= 2` these are the complete homogeneous symmetric polynomials
/// `h_k` evaluated at the primitive n-th roots of unity. For `n = 1` the
/// constant term of `Phi_1 = x - 1` is `-1`, so every coefficient is `-1`;
/// the plain series is returned unchanged (see
/// [`crate::symfunc::complete_at_roots`] for the normalized value).
pub fn inverse_cyclotomic_series(n: u64, terms_through: usize) -> Result<Vec<BigInt>> {
    let phi = cyclotomic_poly_shared(n)?;
    Ok(phi
        .series_inverse(terms_through + 1)
        .expect("cyclotomic polynomials have constant term +1 or -1"))
}

/// Context for arithmetic in `Q(zeta_n) = Q[x] / (Phi_n(x))`.
#[derive(Debug)]
pub struct CyclotomicField {
    n: u64,
    degree: usize,
    modulus: Arc<IntPolynomial>,
    /// Power-basis coordinates of `zeta^k` for `0 <= k < n`.
    powers: Vec<Vec<BigInt>>,
}

static FIELD_CACHE: LazyLock<RwLock<HashMap<u64, Arc<CyclotomicField>>>> =
    LazyLock::new(Default::default);

impl CyclotomicField {
    pub fn get(n: u64) -> Result<Arc<CyclotomicField>> {
        if n == 0 {
            return Err(Error::ZeroConductor);
        }
        if let Some(f) = FIELD_CACHE.read().unwrap().get(&n) {
            return Ok(f.clone());
        }
        let modulus = cyclotomic_poly_shared(n)?;
        let degree = modulus.degree().unwrap();
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x, reduce the overflow coefficient via the monic modulus
            let top = cur.pop().unwrap();
            cur.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (c, m) in cur.iter_mut().zip(modulus.coeffs()) {
                    *c -= &top * m;
                }
            }
        }
        let field = Arc::new(CyclotomicField {
            n,
            degree,
            modulus,
            powers,
        });
        FIELD_CACHE
            .write()
            .unwrap()
            .entry(n)
            .or_insert_with(|| field.clone());
        Ok(field)
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// `phi(n)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &IntPolynomial {
        &self.modulus
    }

    /// Power-basis coordinates of `zeta_n^k` (any `k`, reduced mod `n`).
    pub fn power_coords(&self, k: u64) -> &[BigInt] {
        &self.powers[(k % self.n) as usize]
    }

    /// Reduces an integer coefficient vector of any length modulo `Phi_n`.
    fn reduce(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.degree];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < self.degree {
                out[k] += c;
            } else {
                for (o, p) in out.iter_mut().zip(self.power_coords(k as u64)) {
                    if !p.is_zero() {
                        *o += c * p;
                    }
                }
            }
        }
        out
    }
}

/// An element of `Q(zeta_n)` in the power basis `1, zeta, ..., zeta^(d-1)`.
///
/// Internally the coordinates are `numerators / denominator` with a positive
/// common denominator in lowest terms; [`CycloElement::coeffs`] exposes them
/// as rationals. Binary operators panic on a conductor mismatch, which is a
/// usage error; the `try_*` methods report it instead.
#[derive(Clone)]
pub struct CycloElement {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloElement {
    fn from_parts(field: Arc<CyclotomicField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut e = CycloElement { field, num, den };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let g = self.num.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() && !g.is_zero() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
        }
    }

    pub fn zero(n: u64) -> Result<Self> {
        let f = CyclotomicField::get(n)?;
        let d = f.degree;
        Ok(CycloElement {
            field: f,
            num: vec![BigInt::zero(); d],
            den: BigInt::one(),
        })
    }

    pub fn one(n: u64) -> Result<Self> {
        Self::from_integer(n, BigInt::one())
    }

    pub fn from_integer(n: u64, value: BigInt) -> Result<Self> {
        let mut e = Self::zero(n)?;
        e.num[0] = value;
        Ok(e)
    }

    /// `zeta_n^k`.
    pub fn zeta_pow(n: u64, k: u64) -> Result<Self> {
        let f = CyclotomicField::get(n)?;
        let num = f.power_coords(k).to_vec();
        Ok(CycloElement {
            field: f,
            num,
            den: BigInt::one(),
        })
    }

    pub fn zeta(n: u64) -> Result<Self> {
        Self::zeta_pow(n, 1)
    }

    /// Element with the given power-basis coordinates (exactly `phi(n)` of them).
    pub fn from_rationals(n: u64, coeffs: &[BigRational]) -> Result<Self> {
        let f = CyclotomicField::get(n)?;
        if coeffs.len() != f.degree {
            return Err(Error::DimensionMismatch {
                expected: f.degree,
                got: coeffs.len(),
            });
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        Ok(Self::from_parts(f, num, den))
    }

    pub fn conductor(&self) -> u64 {
        self.field.n
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// Power-basis coordinates as rationals; always `phi(n)` entries.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational_integer().is_some_and(|v| v.is_one())
    }

    /// The value as a rational integer, if it is one: every coordinate but the
    /// constant vanishes and the constant has denominator 1.
    pub fn as_rational_integer(&self) -> Option<BigInt> {
        if !self.den.is_one() || self.num[1..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(self.num[0].clone())
    }

    fn check(&self, rhs: &CycloElement) -> Result<()> {
        if self.field.n != rhs.field.n {
            return Err(Error::ConductorMismatch(self.field.n, rhs.field.n));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &CycloElement) -> Result<CycloElement> {
        self.check(rhs)?;
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &rhs.den + b * &self.den)
            .collect();
        Ok(Self::from_parts(self.field.clone(), num, &self.den * &rhs.den))
    }

    pub fn try_sub(&self, rhs: &CycloElement) -> Result<CycloElement> {
        self.try_add(&-rhs)
    }

    pub fn try_mul(&self, rhs: &CycloElement) -> Result<CycloElement> {
        self.check(rhs)?;
        let d = self.field.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let num = self.field.reduce(&prod);
        Ok(Self::from_parts(self.field.clone(), num, &self.den * &rhs.den))
    }

    pub fn scale(&self, k: &BigInt) -> CycloElement {
        let num = self.num.iter().map(|c| c * k).collect();
        Self::from_parts(self.field.clone(), num, self.den.clone())
    }

    /// Multiplicative inverse; `None` for zero.
    ///
    /// Solves `M x = e_0` where column `j` of `M` holds the coordinates of
    /// `numerator * zeta^j`.
    pub fn inverse(&self) -> Option<CycloElement> {
        if self.is_zero() {
            return None;
        }
        let d = self.field.degree;
        let mut rows = vec![vec![BigInt::zero(); d]; d];
        let mut col = self.num.clone();
        for j in 0..d {
            for i in 0..d {
                rows[i][j] = col[i].clone();
            }
            // col <- col * zeta
            let mut shifted = vec![BigInt::zero(); d + 1];
            for (i, c) in col.iter().enumerate() {
                shifted[i + 1] = c.clone();
            }
            col = self.field.reduce(&shifted);
        }
        let mut rhs = vec![BigInt::zero(); d];
        rhs[0] = BigInt::one();
        let x = solve_integer(&rows, &rhs).expect("nonzero field elements are invertible");
        let den = x.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = x
            .iter()
            .map(|c| (c * &den).to_integer() * &self.den)
            .collect();
        Some(Self::from_parts(self.field.clone(), num, den))
    }

    /// `self / rhs`; `None` when `rhs` is zero.
    pub fn try_div(&self, rhs: &CycloElement) -> Result<Option<CycloElement>> {
        self.check(rhs)?;
        match rhs.inverse() {
            Some(inv) => self.try_mul(&inv).map(Some),
            None => Ok(None),
        }
    }

    pub fn pow(&self, mut e: u64) -> CycloElement {
        let mut base = self.clone();
        let mut acc = CycloElement::from_parts(
            self.field.clone(),
            {
                let mut v = vec![BigInt::zero(); self.field.degree];
                v[0] = BigInt::one();
                v
            },
            BigInt::one(),
        );
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloElement {}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElement(n={}, {})", self.field.n, self)
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = IntPolynomial::new(self.num.clone())
            .to_string()
            .replace('x', "z");
        if self.den.is_one() {
            write!(f, "{poly}")
        } else {
            write!(f, "({poly})/{}", self.den)
        }
    }
}

impl Add for &CycloElement {
    type Output = CycloElement;
    fn add(self, rhs: &CycloElement) -> CycloElement {
        self.try_add(rhs).expect("conductor mismatch")
    }
}

impl Sub for &CycloElement {
    type Output = CycloElement;
    fn sub(self, rhs: &CycloElement) -> CycloElement {
        self.try_sub(rhs).expect("conductor mismatch")
    }
}

impl Mul for &CycloElement {
    type Output = CycloElement;
    fn mul(self, rhs: &CycloElement) -> CycloElement {
        self.try_mul(rhs).expect("conductor mismatch")
    }
}

impl Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn totient_values() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(12).unwrap(), 4);
        assert_eq!(euler_phi(105).unwrap(), 48);
        assert_eq!(euler_phi(0), Err(Error::ZeroConductor));
    }

    #[test]
    fn totient_matches_gcd_count() {
        for n in 1..200u64 {
            let brute = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(euler_phi(n).unwrap(), brute, "n = {n}");
        }
    }

    #[test]
    fn exponents() {
        assert_eq!(primitive_exponents(1).unwrap(), vec![0]);
        assert_eq!(primitive_exponents(6).unwrap(), vec![1, 5]);
        assert_eq!(primitive_exponents(8).unwrap(), vec![1, 3, 5, 7]);
        assert!(primitive_exponents(0).is_err());
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1).unwrap(), IntPolynomial::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2).unwrap(), IntPolynomial::from_i64s(&[1, 1]));
        assert_eq!(cyclotomic_poly(12).unwrap(), IntPolynomial::from_i64s(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_poly(0), Err(Error::ZeroConductor));
    }

    #[test]
    fn phi_105() {
        let p = cyclotomic_poly(105).unwrap();
        assert_eq!(p.degree(), Some(48));
        assert!(p.is_monic());
        assert_eq!(p.coeff(7), BigInt::from(-2));
        assert_eq!(p.coeff(41), BigInt::from(-2));
    }

    #[test]
    fn inverse_series_examples() {
        assert_eq!(inverse_cyclotomic_series(1, 3).unwrap(), ints(&[-1, -1, -1, -1]));
        assert_eq!(inverse_cyclotomic_series(3, 4).unwrap(), ints(&[1, -1, 0, 1, -1]));
        assert_eq!(inverse_cyclotomic_series(2, 2).unwrap(), ints(&[1, -1, 1]));
    }

    #[test]
    fn zeta_arithmetic() {
        let z3 = CycloElement::zeta(3).unwrap();
        let sq = &z3 * &z3;
        assert_eq!(sq.coeffs(), vec![BigRational::from_integer((-1).into()); 2]);
        let z4 = CycloElement::zeta(4).unwrap();
        assert_eq!((&z4 * &z4).as_rational_integer(), Some(BigInt::from(-1)));
        let one = CycloElement::one(7).unwrap();
        let z7 = CycloElement::zeta(7).unwrap();
        assert_eq!(&z7 * &one, z7);
    }

    #[test]
    fn rational_integer_extraction() {
        let five = CycloElement::from_integer(9, BigInt::from(5)).unwrap();
        assert_eq!(five.as_rational_integer(), Some(BigInt::from(5)));
        let z3 = CycloElement::zeta(3).unwrap();
        assert_eq!(z3.as_rational_integer(), None);
        let sum = &z3 + &(&z3 * &z3);
        assert_eq!(sum.as_rational_integer(), Some(BigInt::from(-1)));
        let half = CycloElement::from_rationals(
            3,
            &[BigRational::new(1.into(), 2.into()), BigRational::zero()],
        )
        .unwrap();
        assert_eq!(half.as_rational_integer(), None);
    }

    #[test]
    fn inverse_and_division() {
        for n in [3u64, 5, 8, 12, 15] {
            let a = &CycloElement::zeta(n).unwrap() + &CycloElement::from_integer(n, 2.into()).unwrap();
            let inv = a.inverse().unwrap();
            assert!((&a * &inv).is_one(), "n = {n}");
            let q = a.try_div(&a).unwrap().unwrap();
            assert!(q.is_one());
        }
        assert!(CycloElement::zero(5).unwrap().inverse().is_none());
    }

    #[test]
    fn zeta_order() {
        for n in 1..=30u64 {
            let z = CycloElement::zeta(n).unwrap();
            let mut acc = CycloElement::one(n).unwrap();
            for k in 1..=n {
                acc = &acc * &z;
                assert_eq!(acc.is_one(), k == n, "n = {n}, k = {k}");
            }
            assert!(z.pow(n).is_one());
        }
    }

    #[test]
    fn mismatch_is_reported() {
        let a = CycloElement::zeta(3).unwrap();
        let b = CycloElement::zeta(5).unwrap();
        assert_eq!(a.try_mul(&b), Err(Error::ConductorMismatch(3, 5)));
    }
}
