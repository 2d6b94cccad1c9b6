//! Partitions and exact values of Schur polynomials at the full set of
//! primitive n-th roots of unity.
//!
//! Two independent routes are provided:
//!
//! * [`schur_at_roots`]: Jacobi–Trudi, `det(h_{λ_i - i + j})`, an integer
//!   determinant whose entries are read off the series `1 / Phi_n`.
//! * [`schur_at_roots_bialternant`]: the ratio `a_{δ+λ} / a_δ` of two
//!   alternants computed in `Q(zeta_n)`.
//!
//! [`scan_box`] evaluates a whole box of partitions at once and is what the
//! bulk checks use; it is cross-validated against [`schur_at_roots`].

use std::collections::{BTreeMap, HashMap};
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{
    cyclotomic_poly_shared, euler_phi, inverse_cyclotomic_series, primitive_exponents,
    CycloElement, CyclotomicField,
};
use crate::error::{Error, Result};
use crate::linalg::det_integer;

/// An integer partition: weakly decreasing positive parts.
///
/// Zero parts are dropped on construction, so `(2, 1, 0)` and `(2, 1)` are the
/// same value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotAPartition(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(1^k)`.
    pub fn column(k: usize) -> Self {
        Partition(vec![1; k])
    }

    /// `(k)`, empty for `k = 0`.
    pub fn row(k: usize) -> Self {
        if k == 0 {
            Self::empty()
        } else {
            Partition(vec![k])
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn largest_part(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    /// Part `i` (0-based), zero past the length.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.largest_part();
        Partition(
            (0..cols)
                .map(|j| self.0.iter().take_while(|&&p| p > j).count())
                .collect(),
        )
    }

    /// Total order used by [`partitions_in_box`]: by weight, then
    /// lexicographically decreasing.
    pub fn box_order(&self, other: &Partition) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A sequence of nonnegative exponents, such as `δ + λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition(pub Vec<usize>);

impl Composition {
    /// `δ = (d-1, d-2, ..., 1, 0)`.
    pub fn staircase(d: usize) -> Self {
        Composition((0..d).rev().collect())
    }

    /// `δ + λ` with `λ` padded by zeros to length `d`.
    pub fn staircase_plus(d: usize, lambda: &Partition) -> Result<Self> {
        if lambda.length() > d {
            return Err(Error::LengthExceedsDegree {
                length: lambda.length(),
                degree: d,
            });
        }
        Ok(Composition(
            (0..d).map(|i| d - 1 - i + lambda.part(i)).collect(),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Every partition with at most `max_length` parts, each at most `max_part`.
///
/// Order: increasing weight; within a weight, lexicographically decreasing
/// (so `(2)` precedes `(1,1)`). The count is `binomial(max_length + max_part, max_length)`.
pub fn partitions_in_box(max_length: usize, max_part: usize) -> PartitionsInBox {
    PartitionsInBox {
        max_length,
        max_part,
        weight: 0,
        current: Some(Vec::new()),
    }
}

pub struct PartitionsInBox {
    max_length: usize,
    max_part: usize,
    weight: usize,
    current: Option<Vec<usize>>,
}

impl PartitionsInBox {
    /// Lexicographically largest partition of `w` fitting the box.
    fn first_of_weight(&self, w: usize) -> Option<Vec<usize>> {
        if self.max_part == 0 {
            return (w == 0).then(Vec::new);
        }
        if w > self.max_length * self.max_part {
            return None;
        }
        let mut parts = vec![self.max_part; w / self.max_part];
        if w % self.max_part != 0 {
            parts.push(w % self.max_part);
        }
        Some(parts)
    }

    /// Next partition of the same weight in decreasing lexicographic order.
    fn next_same_weight(&self, parts: &[usize]) -> Option<Vec<usize>> {
        let mut suffix = 0;
        for i in (0..parts.len()).rev() {
            let v = parts[i] - 1;
            let rest = suffix + 1;
            let slots = self.max_length - i - 1;
            if v > 0 && rest <= v * slots || v == 0 && rest == 0 {
                let mut next = parts[..i].to_vec();
                if v > 0 {
                    next.push(v);
                }
                let mut r = rest;
                while r > 0 {
                    let take = r.min(v);
                    next.push(take);
                    r -= take;
                }
                return Some(next);
            }
            suffix += parts[i];
        }
        None
    }
}

impl Iterator for PartitionsInBox {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        self.current = match self.next_same_weight(&cur) {
            Some(n) => Some(n),
            None => {
                self.weight += 1;
                self.first_of_weight(self.weight)
            }
        };
        Some(Partition(cur))
    }
}

fn require_conductor(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroConductor)
    } else if n < 2 {
        Err(Error::TooSmall {
            what: "conductor",
            min: 2,
            got: n,
        })
    } else {
        Ok(())
    }
}

/// `e_k` at the primitive n-th roots of unity: `(-1)^k` times the coefficient
/// of `x^(d-k)` in `Phi_n`; zero for `k > d`.
pub fn elementary_at_roots(n: u64, k: usize) -> Result<BigInt> {
    let phi = cyclotomic_poly_shared(n)?;
    let d = phi.degree().unwrap();
    if k > d {
        return Ok(BigInt::zero());
    }
    let c = phi.coeff(d - k);
    Ok(if k % 2 == 0 { c } else { -c })
}

static H_CACHE: LazyLock<RwLock<HashMap<u64, Arc<Vec<BigInt>>>>> =
    LazyLock::new(Default::default);

/// `h_0, ..., h_k` at the primitive n-th roots of unity, memoized per `n`.
fn complete_sequence(n: u64, k: usize) -> Result<Arc<Vec<BigInt>>> {
    if let Some(h) = H_CACHE.read().unwrap().get(&n) {
        if h.len() > k {
            return Ok(h.clone());
        }
    }
    let len = (k + 1).max(64);
    let sign = cyclotomic_poly_shared(n)?.coeff(0);
    let seq: Vec<BigInt> = inverse_cyclotomic_series(n, len - 1)?
        .into_iter()
        .map(|c| c * &sign)
        .collect();
    let seq = Arc::new(seq);
    let mut cache = H_CACHE.write().unwrap();
    let entry = cache.entry(n).or_insert_with(|| seq.clone());
    if entry.len() < seq.len() {
        *entry = seq.clone();
    }
    Ok(seq)
}

/// `h_k` at the primitive n-th roots of unity: the coefficient of `x^k` in
/// `1 / Phi_n(x)` times `Phi_n(0)`.
///
/// `Phi_n(0) = 1` for every `n >= 2`, so there this is the plain series
/// coefficient. For `n = 1` the series of `1 / (x - 1)` has every coefficient
/// `-1`, while `h_k(1) = 1`; the normalization factor restores the latter.
pub fn complete_at_roots(n: u64, k: usize) -> Result<BigInt> {
    Ok(complete_sequence(n, k)?[k].clone())
}

/// `s_λ` at the `d = phi(n)` primitive n-th roots of unity via Jacobi–Trudi.
pub fn schur_at_roots(n: u64, lambda: &Partition) -> Result<BigInt> {
    require_conductor(n)?;
    let d = euler_phi(n)? as usize;
    if lambda.length() > d {
        return Err(Error::LengthExceedsDegree {
            length: lambda.length(),
            degree: d,
        });
    }
    let l = lambda.length();
    if l == 0 {
        return Ok(BigInt::one());
    }
    let h = complete_sequence(n, lambda.largest_part() + l)?;
    let rows = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let idx = lambda.part(i) as i64 - i as i64 + j as i64;
                    if idx < 0 {
                        BigInt::zero()
                    } else {
                        h[idx as usize].clone()
                    }
                })
                .collect()
        })
        .collect();
    Ok(det_integer(rows))
}

/// Integer matrix `C_μ` whose column `j` holds the power-basis coordinates of
/// `zeta_n^{μ_j}`.
fn power_coordinate_matrix(field: &CyclotomicField, mu: &Composition) -> Vec<Vec<BigInt>> {
    let d = field.degree();
    let cols: Vec<&[BigInt]> = mu.0.iter().map(|&m| field.power_coords(m as u64)).collect();
    (0..d)
        .map(|k| cols.iter().map(|c| c[k].clone()).collect())
        .collect()
}

static VANDERMONDE: LazyLock<RwLock<HashMap<u64, Arc<CycloElement>>>> =
    LazyLock::new(Default::default);

/// `det(ω_i^j)` for rows `ω_i = zeta^{a_i}` (ascending primitive exponents)
/// and columns `j = 0..d-1`, computed as `prod_{i<j} (ω_j - ω_i)`.
fn vandermonde(n: u64) -> Result<Arc<CycloElement>> {
    if let Some(v) = VANDERMONDE.read().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let roots: Vec<CycloElement> = primitive_exponents(n)?
        .into_iter()
        .map(|a| CycloElement::zeta_pow(n, a))
        .collect::<Result<_>>()?;
    let mut acc = CycloElement::one(n)?;
    for j in 0..roots.len() {
        for i in 0..j {
            acc = &acc * &(&roots[j] - &roots[i]);
        }
    }
    let v = Arc::new(acc);
    VANDERMONDE
        .write()
        .unwrap()
        .entry(n)
        .or_insert_with(|| v.clone());
    Ok(v)
}

/// The alternant `a_μ = det(ω_i^{μ_j})` as an element of `Q(zeta_n)`.
///
/// Rows follow the ascending primitive exponents `a_i` (`ω_i = zeta^{a_i}`),
/// columns follow the order of `μ`.
///
/// Each column `(ω_i^{μ_j})_i` is the image of `zeta^{μ_j}` under the
/// embeddings, so the matrix factors as `W · C_μ` with `W = (ω_i^k)` the
/// Vandermonde matrix and `C_μ` the integer matrix of power-basis coordinates
/// of `zeta^{μ_j}`. The value is `det(W) · det(C_μ)`.
pub fn alternant_at_roots(n: u64, mu: &Composition) -> Result<CycloElement> {
    require_conductor(n)?;
    let field = CyclotomicField::get(n)?;
    let d = field.degree();
    if mu.len() != d {
        return Err(Error::CompositionLength {
            expected: d,
            got: mu.len(),
        });
    }
    let c = det_integer(power_coordinate_matrix(&field, mu));
    Ok(vandermonde(n)?.scale(&c))
}

static DELTA_INVERSE: LazyLock<RwLock<HashMap<u64, Arc<CycloElement>>>> =
    LazyLock::new(Default::default);

fn staircase_alternant_inverse(n: u64, d: usize) -> Result<Arc<CycloElement>> {
    if let Some(v) = DELTA_INVERSE.read().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let a_delta = alternant_at_roots(n, &Composition::staircase(d))?;
    let inv = Arc::new(
        a_delta
            .inverse()
            .expect("the staircase alternant of distinct roots is nonzero"),
    );
    DELTA_INVERSE
        .write()
        .unwrap()
        .entry(n)
        .or_insert_with(|| inv.clone());
    Ok(inv)
}

/// `s_λ` at the primitive n-th roots of unity as `a_{δ+λ} / a_δ`, divided in
/// `Q(zeta_n)`. The quotient must be a rational integer; anything else is an
/// arithmetic defect and is reported as [`Error::NonIntegralRatio`].
pub fn schur_at_roots_bialternant(n: u64, lambda: &Partition) -> Result<BigInt> {
    require_conductor(n)?;
    let d = euler_phi(n)? as usize;
    let mu = Composition::staircase_plus(d, lambda)?;
    let numerator = alternant_at_roots(n, &mu)?;
    let inv = staircase_alternant_inverse(n, d)?;
    (&numerator * &inv)
        .as_rational_integer()
        .ok_or_else(|| Error::NonIntegralRatio {
            n,
            lambda: lambda.parts().to_vec(),
        })
}

/// One evaluated table row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchurRow {
    pub n: u64,
    pub lambda: Partition,
    #[serde(serialize_with = "serialize_bigint")]
    pub value: BigInt,
}

pub(crate) fn serialize_bigint<S: serde::Serializer>(
    v: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

/// Aggregate result of evaluating `s_λ` over a whole box of partitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSummary {
    pub n: u64,
    pub max_len: usize,
    pub max_part: usize,
    /// Number of partitions evaluated.
    pub partitions: u64,
    /// Value -> number of partitions taking it.
    pub histogram: BTreeMap<BigInt, u64>,
    /// Number of partitions with `|s_λ| > 1`.
    pub violations: u64,
    /// The first such partition in [`partitions_in_box`] order, with its value.
    pub first_violation: Option<(Partition, BigInt)>,
}

impl ScanSummary {
    pub fn all_in_unit_set(&self) -> bool {
        self.violations == 0
    }

    fn record(&mut self, lambda: impl FnOnce() -> Partition, weight: usize, value: BigInt) {
        self.partitions += 1;
        if value.abs() > BigInt::one() {
            self.violations += 1;
            let replacement = match &self.first_violation {
                None => Some(lambda()),
                Some((p, _)) if weight <= p.weight() => {
                    let cand = lambda();
                    (cand.box_order(p) == Ordering::Less).then_some(cand)
                }
                Some(_) => None,
            };
            if let Some(p) = replacement {
                self.first_violation = Some((p, value.clone()));
            }
        }
        *self.histogram.entry(value).or_insert(0) += 1;
    }

    fn merge(mut self, other: ScanSummary) -> ScanSummary {
        self.partitions += other.partitions;
        self.violations += other.violations;
        for (v, c) in other.histogram {
            *self.histogram.entry(v).or_insert(0) += c;
        }
        self.first_violation = match (self.first_violation, other.first_violation) {
            (Some(a), Some(b)) => Some(if b.0.box_order(&a.0) == Ordering::Less { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Largest matrix side handled by the minor-table scan; bigger boxes are
/// evaluated partition by partition.
const SCAN_MAX_SIDE: usize = 14;

/// Evaluates `s_λ` at the primitive n-th roots of unity for every `λ` with at
/// most `max_len` parts, each at most `max_part`.
///
/// The box is walked depth-first over the rows of a fixed-size Jacobi–Trudi
/// matrix: the `h` form with rows indexed by the parts of `λ` when
/// `max_len <= max_part`, otherwise the dual `e` form with rows indexed by the
/// parts of the conjugate (`s_λ = det(e_{λ'_i - i + j})`). Zero parts pad the
/// matrix with a unitriangular block, so one matrix size serves the whole box.
/// All minors on the first `k` rows are kept for each prefix; appending a row
/// is a Laplace expansion along it, so each leaf costs one row of work.
pub fn scan_box(n: u64, max_len: usize, max_part: usize) -> Result<ScanSummary> {
    require_conductor(n)?;
    let d = euler_phi(n)? as usize;
    if max_len > d {
        return Err(Error::LengthExceedsDegree {
            length: max_len,
            degree: d,
        });
    }
    let empty = ScanSummary {
        n,
        max_len,
        max_part,
        partitions: 0,
        histogram: BTreeMap::new(),
        violations: 0,
        first_violation: None,
    };
    let use_h = max_len <= max_part;
    let (side, cap) = if use_h {
        (max_len, max_part)
    } else {
        (max_part, max_len)
    };
    if side == 0 {
        let mut s = empty;
        s.record(Partition::empty, 0, BigInt::one());
        return Ok(s);
    }
    if side > SCAN_MAX_SIDE {
        return Ok(scan_pointwise(n, max_len, max_part, empty));
    }
    let seq: Vec<i64> = if use_h {
        let h = complete_sequence(n, cap + side)?;
        h[..=cap + side].iter().map(|v| v.to_i64()).collect::<Option<_>>()
    } else {
        (0..=cap + side)
            .map(|k| elementary_at_roots(n, k).map(|v| v.to_i64()))
            .collect::<Result<Option<_>>>()?
    }
    .expect("symmetric function values at roots of unity fit in 64 bits for scanned boxes");

    let table = MinorTable::new(side);
    let starts: Vec<usize> = (0..=cap).collect();
    let partial = starts
        .into_par_iter()
        .map(|first| {
            let mut walker = Walker {
                table: &table,
                seq: &seq,
                side,
                use_h,
                minors: vec![vec![0i64; 1 << side]; side + 1],
                rows: vec![0; side],
                summary: ScanSummary {
                    histogram: BTreeMap::new(),
                    first_violation: None,
                    ..empty.clone()
                },
                overflow: false,
            };
            walker.minors[0][0] = 1;
            walker.push_row(0, first);
            (walker.summary, walker.overflow)
        })
        .collect::<Vec<_>>();
    if partial.iter().any(|(_, o)| *o) {
        return Ok(scan_pointwise(n, max_len, max_part, empty));
    }
    let mut total = empty;
    for (s, _) in partial {
        total = total.merge(s);
    }
    Ok(total)
}

fn scan_pointwise(n: u64, max_len: usize, max_part: usize, mut summary: ScanSummary) -> ScanSummary {
    for lambda in partitions_in_box(max_len, max_part) {
        let v = schur_at_roots(n, &lambda).expect("box respects the length bound");
        let w = lambda.weight();
        summary.record(|| lambda.clone(), w, v);
    }
    summary
}

/// For each number of rows `k`, the column subsets of size `k` and the Laplace
/// terms `(column, sign, subset without column)` expanding along row `k - 1`.
struct MinorTable {
    levels: Vec<Vec<(usize, Vec<(usize, i64, usize)>)>>,
}

impl MinorTable {
    fn new(side: usize) -> Self {
        let mut levels = vec![Vec::new(); side + 1];
        for mask in 0usize..(1 << side) {
            let k = mask.count_ones() as usize;
            if k == 0 {
                continue;
            }
            let mut terms = Vec::with_capacity(k);
            let mut pos = 0;
            for c in 0..side {
                if mask & (1 << c) != 0 {
                    let sign = if (k - 1 + pos) % 2 == 0 { 1 } else { -1 };
                    terms.push((c, sign, mask & !(1 << c)));
                    pos += 1;
                }
            }
            levels[k].push((mask, terms));
        }
        MinorTable { levels }
    }
}

struct Walker<'a> {
    table: &'a MinorTable,
    seq: &'a [i64],
    side: usize,
    use_h: bool,
    minors: Vec<Vec<i64>>,
    rows: Vec<usize>,
    summary: ScanSummary,
    overflow: bool,
}

impl Walker<'_> {
    fn entry(&self, row: usize, part: usize, col: usize) -> i64 {
        let idx = part as i64 - row as i64 + col as i64;
        if idx < 0 {
            0
        } else {
            self.seq[idx as usize]
        }
    }

    /// Sets row `level` to `part`, updates the minor table, and recurses.
    fn push_row(&mut self, level: usize, part: usize) {
        if self.overflow {
            return;
        }
        self.rows[level] = part;
        let vals: Vec<i64> = (0..self.side).map(|c| self.entry(level, part, c)).collect();
        let (lower, upper) = self.minors.split_at_mut(level + 1);
        let prev = &lower[level];
        let next = &mut upper[0];
        let last = level + 1 == self.side;
        for (mask, terms) in &self.table.levels[level + 1] {
            let mut acc: i64 = 0;
            for &(c, sign, sub) in terms {
                let v = vals[c];
                if v == 0 {
                    continue;
                }
                let m = prev[sub];
                if m == 0 {
                    continue;
                }
                match v.checked_mul(m).and_then(|t| acc.checked_add(sign * t)) {
                    Some(a) => acc = a,
                    None => {
                        self.overflow = true;
                        return;
                    }
                }
            }
            next[*mask] = acc;
            if last {
                break;
            }
        }
        if last {
            self.leaf();
        } else {
            for p in 0..=part {
                self.push_row(level + 1, p);
            }
        }
    }

    fn leaf(&mut self) {
        let value = BigInt::from(self.minors[self.side][(1 << self.side) - 1]);
        let weight: usize = self.rows.iter().sum();
        let rows = &self.rows;
        let use_h = self.use_h;
        self.summary.record(
            || {
                let p = Partition::new(rows.clone()).unwrap();
                if use_h {
                    p
                } else {
                    p.conjugate()
                }
            },
            weight,
            value,
        );
    }
}
