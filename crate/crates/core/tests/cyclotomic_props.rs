mod common;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use cycloschur::*;
use common::*;

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

#[test]
fn product_over_divisors_is_x_pow_n_minus_one() {
    for n in 1..=60u64 {
        let prod = divisors(n)
            .into_iter()
            .fold(IntPolynomial::one(), |acc, d| &acc * &cyclotomic_poly(d).unwrap());
        assert_eq!(prod, IntPolynomial::x_pow_minus_one(n as usize), "n = {n}");
    }
}

#[test]
fn phi_divides_x_pow_n_minus_one() {
    for n in 1..=60u64 {
        let phi = cyclotomic_poly(n).unwrap();
        let (_, r) = IntPolynomial::x_pow_minus_one(n as usize).div_rem(&phi).unwrap();
        assert!(r.is_zero(), "n = {n}");
        assert_eq!(phi.degree(), Some(euler_phi(n).unwrap() as usize));
        assert!(phi.is_monic());
    }
}

#[test]
fn matches_mobius_oracle() {
    for n in 1..=60u64 {
        let expect: Vec<BigInt> = cyclotomic_mobius(n).into_iter().map(BigInt::from).collect();
        assert_eq!(cyclotomic_poly(n).unwrap().coeffs(), &expect[..], "n = {n}");
    }
}

#[test]
fn reciprocal_series_convolves_to_one() {
    for n in 1..=60u64 {
        let phi = cyclotomic_poly(n).unwrap();
        let series = inverse_cyclotomic_series(n, 40).unwrap();
        assert_eq!(series.len(), 41);
        for k in 0..=40usize {
            let conv: BigInt = (0..=k).map(|i| phi.coeff(i) * &series[k - i]).sum();
            let expect = if k == 0 { BigInt::one() } else { BigInt::zero() };
            assert_eq!(conv, expect, "n = {n}, k = {k}");
        }
    }
}

#[test]
fn newton_identity_between_e_and_h() {
    for n in 1..=30u64 {
        for k in 1..=10usize {
            let total: BigInt = (0..=k)
                .map(|i| {
                    let t = elementary_at_roots(n, i).unwrap() * complete_at_roots(n, k - i).unwrap();
                    if i % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .sum();
            assert!(total.is_zero(), "n = {n}, k = {k}");
        }
    }
}

#[test]
fn elementary_values_match_oracle() {
    for n in 1..=60u64 {
        for k in 0..=12usize {
            assert_eq!(elementary_at_roots(n, k).unwrap(), BigInt::from(elementary_oracle(n, k)));
        }
    }
}

#[test]
fn zeta_has_exact_order_n() {
    for n in 1..=40u64 {
        let z = CycloElement::zeta(n).unwrap();
        assert!(z.pow(n).is_one(), "n = {n}");
        for k in 1..n {
            assert!(!z.pow(k).is_one(), "zeta_{n}^{k} = 1");
        }
    }
}

#[test]
fn primitive_exponents_are_units() {
    for n in 1..=60u64 {
        let want: Vec<u64> = primitive_residues(n).into_iter().map(|k| k % n).collect();
        let mut got = primitive_exponents(n).unwrap();
        let mut want = want;
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want, "n = {n}");
    }
}

fn element(n: u64) -> impl Strategy<Value = CycloElement> {
    let d = euler_phi(n).unwrap() as usize;
    prop::collection::vec(-5i64..=5, d).prop_map(move |c| {
        c.iter().enumerate().fold(CycloElement::zero(n).unwrap(), |acc, (i, &v)| {
            let term = CycloElement::zeta_pow(n, i as u64).unwrap().scale(&BigInt::from(v));
            &acc + &term
        })
    })
}

fn triple() -> impl Strategy<Value = (CycloElement, CycloElement, CycloElement)> {
    (1u64..=30).prop_flat_map(|n| (element(n), element(n), element(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        let n = a.conductor();
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &CycloElement::one(n).unwrap(), a.clone());
        prop_assert!((&a - &a).is_zero());
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn nonzero_elements_invert((a, _, _) in triple()) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().expect("field element is invertible");
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn zeta_powers_reduce_mod_n(n in 1u64..=40, j in 0u64..200, k in 0u64..200) {
        let z = CycloElement::zeta(n).unwrap();
        prop_assert_eq!(&z.pow(j) * &z.pow(k), CycloElement::zeta_pow(n, (j + k) % n).unwrap());
    }
}
