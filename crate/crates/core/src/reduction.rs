//! `Z_n` as a vector system in the power basis of `Q(zeta_n)`, the linear
//! isomorphisms that split it into tensor products of `Z_p`, and an end-to-end
//! verifier comparing Schur values with unimodularity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclotomic::{euler_phi, factorize, is_prime, CyclotomicField};
use crate::error::{Error, Result};
use crate::linalg::{det_exact, RationalMatrix};
use crate::symfunc::{scan_box, serialize_bigint, Partition, ScanSummary};
use crate::unimodular::{
    basis_abs_det, disjoint_sum, find_nonunimodular_witness, is_unimodular_system,
    serialize_rational, tensor_product, BasisPair, UnimodularCheck, VectorSystem,
    DEFAULT_SUBSET_BUDGET, DEFAULT_WITNESS_BUDGET,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionStarReport {
    pub n: u64,
    pub odd_prime_factors: Vec<u64>,
    pub satisfied: bool,
}

/// Whether `n` has at most two distinct odd prime factors.
pub fn condition_star(n: u64) -> Result<ConditionStarReport> {
    if n == 0 {
        return Err(Error::ZeroConductor);
    }
    let odd: Vec<u64> = factorize(n)
        .into_iter()
        .map(|(p, _)| p)
        .filter(|&p| p != 2)
        .collect();
    Ok(ConditionStarReport {
        n,
        satisfied: odd.len() <= 2,
        odd_prime_factors: odd,
    })
}

/// `n = 2^k p^l q^m` with `p < q` odd primes; absent factors are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorShape {
    pub n: u64,
    pub two_exponent: u32,
    pub odd: Vec<(u64, u32)>,
}

impl FactorShape {
    /// Number of direct summands when `Q(zeta_n)` is split into copies of
    /// `Q(zeta_p) ⊗ Q(zeta_q)`: the product of `r^(e - 1)` over prime powers
    /// `r^e` dividing `n` exactly. Equals `phi(n) / prod (r - 1)`.
    pub fn summand_count(&self) -> u64 {
        let two = if self.two_exponent > 0 {
            1u64 << (self.two_exponent - 1)
        } else {
            1
        };
        self.odd.iter().fold(two, |acc, &(p, l)| acc * p.pow(l - 1))
    }
}

/// Rejects `n` with three or more odd prime factors.
pub fn factor_shape(n: u64) -> Result<FactorShape> {
    let star = condition_star(n)?;
    if !star.satisfied {
        return Err(Error::TooManyOddPrimes(n));
    }
    let f = factorize(n);
    Ok(FactorShape {
        n,
        two_exponent: f.iter().find(|(p, _)| *p == 2).map_or(0, |&(_, e)| e),
        odd: f.into_iter().filter(|(p, _)| *p != 2).collect(),
    })
}

fn require_at_least_two(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::TooSmall {
            what: "n",
            min: 2,
            got: n,
        });
    }
    Ok(())
}

/// The `n` vectors `zeta_n^0, ..., zeta_n^(n-1)` in power-basis coordinates of
/// `Q(zeta_n)`, in that order. `n = 1` is rejected: `Q(zeta_1) = Q` and
/// `Z_1 = {1}` is degenerate.
pub fn z_n_system(n: u64) -> Result<VectorSystem> {
    require_at_least_two(n)?;
    let field = CyclotomicField::get(n)?;
    let vectors = (0..n)
        .map(|k| {
            field
                .power_coords(k)
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        })
        .collect();
    VectorSystem::new(field.degree(), vectors)
}

/// The system `{(w_1^k, ..., w_d^k)}` over the primitive roots `w_i`.
///
/// Projecting onto the first coordinate identifies it with `Z_n`, so this is
/// [`z_n_system`] under another name.
pub fn omega_n_system(n: u64) -> Result<VectorSystem> {
    z_n_system(n)
}

/// A linear map carrying one vector system onto another.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitCertificate {
    pub matrix: RationalMatrix,
    #[serde(skip)]
    pub domain: VectorSystem,
    #[serde(skip)]
    pub target: VectorSystem,
    #[serde(serialize_with = "serialize_rational")]
    pub determinant: BigRational,
    /// The image of `domain` equals `target` as a multiset.
    pub image_matches: bool,
}

impl SplitCertificate {
    /// Computes the determinant and checks the image.
    pub fn new(matrix: RationalMatrix, domain: VectorSystem, target: VectorSystem) -> Result<Self> {
        let determinant = det_exact(&matrix)?;
        let image_matches = !determinant.is_zero()
            && domain
                .map_linear(&matrix)
                .is_ok_and(|img| img.same_multiset(&target));
        Ok(SplitCertificate {
            matrix,
            domain,
            target,
            determinant,
            image_matches,
        })
    }

    /// Invertible and image-preserving.
    pub fn is_valid(&self) -> bool {
        !self.determinant.is_zero() && self.image_matches
    }

    pub fn identity(x: &VectorSystem) -> Self {
        SplitCertificate {
            matrix: RationalMatrix::identity(x.ambient_dim()),
            domain: x.clone(),
            target: x.clone(),
            determinant: BigRational::one(),
            image_matches: true,
        }
    }

    /// `self ⊗ other` on left-major tensor coordinates.
    pub fn tensor(&self, other: &SplitCertificate) -> Result<Self> {
        SplitCertificate::new(
            self.matrix.kron(&other.matrix),
            tensor_product(&self.domain, &other.domain),
            tensor_product(&self.target, &other.target),
        )
    }

    /// `next ∘ self`, from `self.domain` to `next.target`.
    pub fn then(&self, next: &SplitCertificate) -> Result<Self> {
        let matrix = next.matrix.mul(&self.matrix)?;
        SplitCertificate::new(matrix, self.domain.clone(), next.target.clone())
    }
}

/// Column of the map for a basis element sent to `zeta_n^e`.
fn power_column(field: &CyclotomicField, e: u64) -> Vec<BigRational> {
    field
        .power_coords(e)
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

/// `Q(zeta_a) ⊗ Q(zeta_b) -> Q(zeta_ab)`, `z ⊗ w -> zw`, for coprime `a, b`.
///
/// The domain basis is `zeta_a^i ⊗ zeta_b^j` in left-major order, and
/// `zeta_a = zeta_ab^b`, `zeta_b = zeta_ab^a`, so that basis tensor goes to
/// `zeta_ab^(b i + a j)`. The domain system is `Z_a ⊗ Z_b`.
pub fn coprime_split(a: u64, b: u64) -> Result<SplitCertificate> {
    require_at_least_two(a)?;
    require_at_least_two(b)?;
    if num_integer::gcd(a, b) != 1 {
        return Err(Error::NotCoprime(a, b));
    }
    let n = a * b;
    let field = CyclotomicField::get(n)?;
    let (da, db) = (euler_phi(a)?, euler_phi(b)?);
    let mut columns = Vec::with_capacity((da * db) as usize);
    for i in 0..da {
        for j in 0..db {
            columns.push(power_column(&field, b * i + a * j));
        }
    }
    let matrix = RationalMatrix::from_columns(&columns, field.degree())?;
    let domain = tensor_product(&z_n_system(a)?, &z_n_system(b)?);
    SplitCertificate::new(matrix, domain, z_n_system(n)?)
}

/// `Q(zeta_p)^(p^(l-1)) -> Q(zeta_(p^l))`, sending `z` in copy `j` to
/// `zeta_(p^l)^j z`.
///
/// Copy `j`'s basis element `zeta_p^i` goes to `zeta_(p^l)^(j + i p^(l-1))`.
/// The domain system is the disjoint sum of `p^(l-1)` copies of `Z_p`.
pub fn prime_power_split(p: u64, l: u32) -> Result<SplitCertificate> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if l == 0 {
        return Err(Error::TooSmall {
            what: "l",
            min: 1,
            got: 0,
        });
    }
    let zp = z_n_system(p)?;
    if l == 1 {
        return Ok(SplitCertificate::identity(&zp));
    }
    let copies = p.pow(l - 1);
    let n = p * copies;
    let field = CyclotomicField::get(n)?;
    let mut columns = Vec::with_capacity(field.degree());
    for j in 0..copies {
        for i in 0..p - 1 {
            columns.push(power_column(&field, j + i * copies));
        }
    }
    let matrix = RationalMatrix::from_columns(&columns, field.degree())?;
    let mut domain = zp.clone();
    for _ in 1..copies {
        domain = disjoint_sum(&domain, &zp);
    }
    SplitCertificate::new(matrix, domain, z_n_system(n)?)
}

/// The composite of both splits for arbitrary `n >= 2`.
///
/// With `n = prod r_t^(e_t)` over primes `r_1 < r_2 < ...`, the domain is the
/// disjoint sum over copy indices `(j_1, j_2, ...)`, `j_t < r_t^(e_t - 1)` in
/// lexicographic order, of `Z_(r_1) ⊗ Z_(r_2) ⊗ ...`. The basis tensor
/// `⊗ zeta_(r_t)^(i_t)` of copy `(j_t)` goes to `prod zeta_(r_t^e_t)^(j_t + i_t r_t^(e_t - 1))`.
pub fn full_split(n: u64) -> Result<SplitCertificate> {
    require_at_least_two(n)?;
    let field = CyclotomicField::get(n)?;
    let primes = factorize(n);

    let mut unit: Option<VectorSystem> = None;
    for &(r, _) in &primes {
        let z = z_n_system(r)?;
        unit = Some(match unit {
            None => z,
            Some(u) => tensor_product(&u, &z),
        });
    }
    let unit = unit.expect("n >= 2 has a prime factor");

    // (copy stride, p^e, n / p^e) per prime
    let parts: Vec<(u64, u64, u64)> = primes
        .iter()
        .map(|&(r, e)| {
            let q = r.pow(e);
            (q / r, q, n / q)
        })
        .collect();
    let copies: Vec<u64> = parts.iter().map(|p| p.0).collect();
    let mut columns = Vec::with_capacity(field.degree());
    let mut copy = vec![0u64; parts.len()];
    let mut domain: Option<VectorSystem> = None;
    loop {
        let mut basis = vec![0u64; parts.len()];
        loop {
            let e: u64 = parts
                .iter()
                .zip(copy.iter().zip(&basis))
                .map(|(&(stride, _, cof), (&j, &i))| (j + i * stride) * cof)
                .sum();
            columns.push(power_column(&field, e % n));
            if !odometer(&mut basis, |t| primes[t].0 - 1) {
                break;
            }
        }
        domain = Some(match domain {
            None => unit.clone(),
            Some(d) => disjoint_sum(&d, &unit),
        });
        if !odometer(&mut copy, |t| copies[t]) {
            break;
        }
    }
    let matrix = RationalMatrix::from_columns(&columns, field.degree())?;
    SplitCertificate::new(matrix, domain.unwrap(), z_n_system(n)?)
}

/// Lexicographic increment with the last index fastest.
fn odometer(idx: &mut [u64], limit: impl Fn(usize) -> u64) -> bool {
    for t in (0..idx.len()).rev() {
        idx[t] += 1;
        if idx[t] < limit(t) {
            return true;
        }
        idx[t] = 0;
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Passed to [`is_unimodular_system`].
    pub subset_budget: u64,
    /// Exchanges for the witness search used when enumeration is over budget.
    pub witness_budget: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            subset_budget: DEFAULT_SUBSET_BUDGET,
            witness_budget: DEFAULT_WITNESS_BUDGET,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub lambda: Partition,
    #[serde(serialize_with = "serialize_bigint")]
    pub value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectCheck {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub partitions: u64,
    pub violations: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StructuralMode {
    /// Every subset was examined.
    Exhaustive,
    /// Over budget; a witness search ran and found nothing.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralCheck {
    pub pass: bool,
    pub mode: StructuralMode,
    /// `|det|` of the basis `zeta^0, ..., zeta^(d-1)` (always 1 in the power basis).
    #[serde(serialize_with = "serialize_rational")]
    pub a: BigRational,
    /// `false` only for a sampled pass.
    pub conclusive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BasisPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub n: u64,
    pub star: bool,
    pub odd_prime_factors: Vec<u64>,
    pub max_part: usize,
    pub direct: DirectCheck,
    pub structural: StructuralCheck,
    /// All three checks give the same answer.
    pub consistent: bool,
}

/// Runs the direct, structural and gate checks for `n >= 2`.
///
/// Direct: every `λ` with at most `phi(n)` parts, each at most `max_part`, has
/// `|s_λ(primitive roots)| <= 1`. Structural: [`z_n_system`] is unimodular.
/// Gate: [`condition_star`]. The first two run concurrently.
pub fn verify_theorem(n: u64, max_part: usize, options: &VerifyOptions) -> Result<VerdictReport> {
    require_at_least_two(n)?;
    let star = condition_star(n)?;
    let d = euler_phi(n)? as usize;
    let (scan, structural) = rayon::join(
        || scan_box(n, d, max_part),
        || structural_check(n, d, options),
    );
    let direct = direct_check(scan?);
    let structural = structural?;
    Ok(VerdictReport {
        n,
        star: star.satisfied,
        consistent: direct.pass == structural.pass && structural.pass == star.satisfied,
        odd_prime_factors: star.odd_prime_factors,
        max_part,
        direct,
        structural,
    })
}

fn direct_check(s: ScanSummary) -> DirectCheck {
    DirectCheck {
        pass: s.violations == 0,
        counterexample: s
            .first_violation
            .map(|(lambda, value)| Counterexample { lambda, value }),
        partitions: s.partitions,
        violations: s.violations,
    }
}

fn structural_check(n: u64, d: usize, options: &VerifyOptions) -> Result<StructuralCheck> {
    let z = z_n_system(n)?;
    let a = basis_abs_det(&z, &(0..d).collect::<Vec<_>>());
    Ok(match is_unimodular_system(&z, options.subset_budget) {
        UnimodularCheck::Complete(r) => StructuralCheck {
            pass: r.unimodular,
            mode: StructuralMode::Exhaustive,
            a,
            conclusive: true,
            witness: r.witness,
        },
        UnimodularCheck::BudgetExceeded { .. } => {
            let witness = find_nonunimodular_witness(&z, options.witness_budget, options.seed);
            StructuralCheck {
                pass: witness.is_none(),
                mode: StructuralMode::Sampled,
                a,
                conclusive: witness.is_some(),
                witness,
            }
        }
    })
}
