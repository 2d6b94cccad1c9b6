mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cycloschur::*;
use common::*;

/// `h_k` from the reversed cyclotomic polynomial: `prod (1 - w x) = x^d Phi_n(1/x)`.
fn complete_oracle(n: u64, k: usize) -> i128 {
    let phi = cyclotomic_mobius(n);
    let d = phi.len() - 1;
    let rev: Vec<i128> = (0..=d).map(|i| phi[d - i] * phi[0].signum()).collect();
    let mut h = vec![0i128; k + 1];
    h[0] = 1;
    for j in 1..=k {
        h[j] = -(1..=j.min(d)).map(|i| rev[i] * h[j - i]).sum::<i128>();
    }
    h[k]
}

#[test]
fn complete_values_match_oracle() {
    for n in 2..=40u64 {
        for k in 0..=15 {
            assert_eq!(complete_at_roots(n, k).unwrap(), BigInt::from(complete_oracle(n, k)), "n = {n}, k = {k}");
        }
    }
    for k in 0..=6 {
        assert_eq!(complete_at_roots(1, k).unwrap(), BigInt::one());
    }
}

#[test]
fn column_and_row_shapes() {
    for n in 2..=30u64 {
        let d = euler_phi(n).unwrap() as usize;
        for k in 0..=12usize {
            assert_eq!(schur_at_roots(n, &Partition::row(k)).unwrap(), complete_at_roots(n, k).unwrap());
            if k <= d {
                assert_eq!(
                    schur_at_roots(n, &Partition::column(k)).unwrap(),
                    elementary_at_roots(n, k).unwrap(),
                    "n = {n}, k = {k}"
                );
            }
        }
    }
}

#[test]
fn both_formulas_agree_on_boxes() {
    for n in [2u64, 3, 5, 7, 8, 9, 12, 15, 21] {
        let d = euler_phi(n).unwrap() as usize;
        for lambda in partitions_in_box(d.min(5), 4) {
            assert_eq!(
                schur_at_roots(n, &lambda).unwrap(),
                schur_at_roots_bialternant(n, &lambda).unwrap(),
                "n = {n}, λ = {lambda}"
            );
        }
    }
}

#[test]
fn seeded_partitions_match_numeric_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=36u64 {
        let d = euler_phi(n).unwrap() as usize;
        for _ in 0..8 {
            let parts = random_partition(&mut rng, d, 6);
            let lambda = Partition::new(parts.clone()).unwrap();
            assert_eq!(
                schur_at_roots(n, &lambda).unwrap(),
                BigInt::from(schur_numeric(n, &parts)),
                "n = {n}, λ = {parts:?}"
            );
        }
    }
}

#[test]
fn scan_reports_unit_set_membership() {
    let s = scan_box(15, 4, 4).unwrap();
    assert!(s.all_in_unit_set());
    let s = scan_box(105, 7, 1).unwrap();
    assert!(!s.all_in_unit_set());
}

fn composition(max_n: u64) -> impl Strategy<Value = (u64, Vec<usize>)> {
    (2..=max_n).prop_flat_map(|n| {
        let d = euler_phi(n).unwrap() as usize;
        (Just(n), prop::collection::vec(0usize..d + 4, d))
    })
}

/// Sign of the sorting permutation, or `None` with a repeated entry.
fn sort_sign(mu: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut v = mu.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] < v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn swapping_exponents_negates((n, mu) in composition(24), i in 0usize..16, j in 0usize..16) {
        let d = mu.len();
        let (i, j) = (i % d, j % d);
        prop_assume!(i != j);
        let mut swapped = mu.clone();
        swapped.swap(i, j);
        let a = alternant_at_roots(n, &Composition(mu)).unwrap();
        let b = alternant_at_roots(n, &Composition(swapped)).unwrap();
        prop_assert!((&a + &b).is_zero());
    }

    #[test]
    fn alternant_ratio_is_a_signed_schur_value((n, mu) in composition(12)) {
        let d = mu.len();
        let a_mu = alternant_at_roots(n, &Composition(mu.clone())).unwrap();
        let a_delta = alternant_at_roots(n, &Composition::staircase(d)).unwrap();
        let ratio = a_mu.try_div(&a_delta).unwrap().unwrap();
        let expect = match sort_sign(&mu) {
            None => 0,
            Some((sign, sorted)) => {
                let parts: Vec<usize> = sorted.iter().enumerate().map(|(i, &m)| m - (d - 1 - i)).collect();
                sign * schur_numeric(n, &parts)
            }
        };
        prop_assert_eq!(ratio.as_rational_integer(), Some(BigInt::from(expect)));
    }

    #[test]
    fn alternant_ratio_is_a_basis_determinant_ratio((n, mu) in composition(12)) {
        let d = mu.len();
        let z = z_n_system(n).unwrap();
        let idx: Vec<usize> = mu.iter().map(|&m| m % n as usize).collect();
        let staircase: Vec<usize> = (0..d).rev().collect();
        let num = det_exact(&z.subsystem_matrix(&idx)).unwrap();
        let den = det_exact(&z.subsystem_matrix(&staircase)).unwrap();
        let a_mu = alternant_at_roots(n, &Composition(mu)).unwrap();
        let a_delta = alternant_at_roots(n, &Composition::staircase(d)).unwrap();
        let ratio = a_mu.try_div(&a_delta).unwrap().unwrap();
        let q: BigRational = num / den;
        prop_assert!(q.is_integer());
        prop_assert_eq!(ratio.as_rational_integer(), Some(q.to_integer()));
    }
}

#[test]
fn partitions_in_box_counts() {
    // binomial(a + b, a)
    let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    for a in 0..=6usize {
        for b in 0..=6usize {
            assert_eq!(
                partitions_in_box(a, b).count() as u64,
                binom((a + b) as u64, a as u64),
                "{a} x {b}"
            );
        }
    }
}
