//! Exact rational matrices and fraction-free determinant / solve routines.
//!
//! Determinants are computed with Bareiss elimination: every intermediate value
//! is a minor of the input, so integer inputs stay integral and the trailing
//! division at each step is exact. The pivot at each step is the first nonzero
//! entry of the remaining submatrix in row-major order; row and column swaps
//! are tracked in the sign. Small integer inputs take an `i128` path with
//! checked arithmetic and fall back to big integers on overflow.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dense `rows x cols` matrix of exact rationals, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    /// Builds a matrix from integer rows. All rows must have the same length;
    /// `cols` disambiguates the zero-row case.
    pub fn from_integer_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row.iter().map(|&v| BigRational::from_integer(v.into())));
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Self::new(nrows, cols, data)
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<BigRational>], rows: usize) -> Result<Self> {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: col.len(),
                });
            }
            for (i, v) in col.iter().enumerate() {
                m.data[i * cols + j] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        RationalMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &RationalMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: other.rows,
            });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Self::new(self.rows, cols, data)
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn neg(&self) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &RationalMatrix) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.data[(i * rhs.rows + k) * cols + j * rhs.cols + l] = a * rhs.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigRational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        rank_of_rows(rows)
    }

    /// Solves `self * X = rhs` for square nonsingular `self`; `None` when singular.
    pub fn solve(&self, rhs: &RationalMatrix) -> Result<Option<RationalMatrix>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: rhs.rows,
            });
        }
        let n = self.rows;
        let w = n + rhs.cols;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(rhs.row(i));
                r
            })
            .collect();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(None);
            };
            a.swap(k, p);
            let inv = a[k][k].recip();
            for v in a[k].iter_mut().skip(k) {
                *v *= &inv;
            }
            let pivot_row = a[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k || row[k].is_zero() {
                    continue;
                }
                let f = row[k].clone();
                for j in k..w {
                    if !pivot_row[j].is_zero() {
                        row[j] -= &f * &pivot_row[j];
                    }
                }
            }
        }
        let mut x = RationalMatrix::zeros(n, rhs.cols);
        for (i, row) in a.into_iter().enumerate() {
            for (j, v) in row.into_iter().skip(n).enumerate() {
                x.data[i * rhs.cols + j] = v;
            }
        }
        Ok(Some(x))
    }

    /// Each row scaled by the least common multiple of its denominators.
    /// Returns the integer rows and the product of the scale factors.
    pub(crate) fn integer_rows_scaled(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut total = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                total *= &l;
                row.iter().map(|v| (v * &l).to_integer()).collect()
            })
            .collect();
        (rows, total)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|v| v.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// JSON form: an array of rows, each an array of strings such as `"-3"` or `"1/2"`.
impl Serialize for RationalMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

/// One matrix entry, parsed as soon as it is read so that errors carry the
/// deserializer's position.
struct Entry(BigRational);

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.trim()
            .parse()
            .map(Entry)
            .map_err(|_| serde::de::Error::custom(format!("entry is not a number: {s:?}")))
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<Entry>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|e| e.0).collect())
            .collect();
        RationalMatrix::from_rows(rows, cols).map_err(serde::de::Error::custom)
    }
}

impl RationalMatrix {
    pub fn from_string_rows(rows: &[Vec<String>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut parsed = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::MalformedMatrix(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            let r = row
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    s.trim().parse::<BigRational>().map_err(|_| {
                        Error::MalformedMatrix(format!("entry ({i}, {j}) is not a number: {s:?}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            parsed.push(r);
        }
        Self::from_rows(parsed, cols)
    }
}

/// Exact determinant of a square rational matrix.
pub fn det_exact(m: &RationalMatrix) -> Result<BigRational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let (rows, scale) = m.integer_rows_scaled();
    Ok(BigRational::new(det_integer(rows), scale))
}

/// Determinant of a square integer matrix given as rows.
pub fn det_integer(rows: Vec<Vec<BigInt>>) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    if let Some(small) = to_small(&rows) {
        if let Some(d) = det_small(small, n) {
            return BigInt::from(d);
        }
    }
    det_bareiss_big(rows)
}

fn to_small(rows: &[Vec<BigInt>]) -> Option<Vec<i128>> {
    let mut out = Vec::with_capacity(rows.len() * rows.len());
    for r in rows {
        for v in r {
            out.push(v.to_i64()? as i128);
        }
    }
    Some(out)
}

/// Bareiss over `i128` with overflow detection. `a` is row-major `n x n`.
/// Returns `None` on overflow.
pub(crate) fn det_small(mut a: Vec<i128>, n: usize) -> Option<i128> {
    if n == 0 {
        return Some(1);
    }
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for k in 0..n {
        let mut pivot = None;
        'scan: for i in k..n {
            for j in k..n {
                if a[i * n + j] != 0 {
                    pivot = Some((i, j));
                    break 'scan;
                }
            }
        }
        let (pi, pj) = match pivot {
            Some(p) => p,
            None => return Some(0),
        };
        if pi != k {
            for j in 0..n {
                a.swap(pi * n + j, k * n + j);
            }
            sign = -sign;
        }
        if pj != k {
            for i in 0..n {
                a.swap(i * n + pj, i * n + k);
            }
            sign = -sign;
        }
        let p = a[k * n + k];
        for i in k + 1..n {
            let aik = a[i * n + k];
            for j in k + 1..n {
                let v = p
                    .checked_mul(a[i * n + j])?
                    .checked_sub(aik.checked_mul(a[k * n + j])?)?;
                a[i * n + j] = v / prev;
            }
            a[i * n + k] = 0;
        }
        prev = p;
    }
    Some(sign * a[n * n - 1])
}

fn det_bareiss_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let mut pivot = None;
        'scan: for (i, row) in a.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                if !v.is_zero() {
                    pivot = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            return BigInt::zero();
        };
        if pi != k {
            a.swap(pi, k);
            negate = !negate;
        }
        if pj != k {
            for row in a.iter_mut() {
                row.swap(pj, k);
            }
            negate = !negate;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let p = &pivot_row[k];
        for row in bottom.iter_mut() {
            let aik = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let v = p * &row[j] - &aik * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = top[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Solves `a x = b` for square nonsingular integer `a` by fraction-free forward
/// elimination followed by rational back substitution.
pub(crate) fn solve_integer(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, p);
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let aik = std::mem::take(&mut row[k]);
            for j in k + 1..=n {
                let v = &pivot_row[k] * &row[j] - &aik * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = top[k][k].clone();
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            if !m[i][j].is_zero() {
                acc -= &x[j] * BigRational::from_integer(m[i][j].clone());
            }
        }
        x[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    Some(x)
}

pub(crate) fn rank_of_rows(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot[c];
            for j in c..ncols {
                if !pivot[j].is_zero() {
                    row[j] -= &f * &pivot[j];
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        RationalMatrix::from_integer_rows(&owned, cols).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn identity_det() {
        assert_eq!(det_exact(&RationalMatrix::identity(3)).unwrap(), q(1));
        assert_eq!(det_exact(&RationalMatrix::identity(0)).unwrap(), q(1));
    }

    #[test]
    fn repeated_row_is_singular() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]);
        assert_eq!(det_exact(&a).unwrap(), q(0));
    }

    #[test]
    fn pivoting_with_zero_corner() {
        let a = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_exact(&a).unwrap(), q(-1));
        let b = m(&[&[0, 0, 1], &[0, 2, 0], &[3, 0, 0]]);
        assert_eq!(det_exact(&b).unwrap(), q(-6));
    }

    #[test]
    fn rational_entries() {
        let mut a = RationalMatrix::identity(2);
        a.set(0, 0, BigRational::new(1.into(), 2.into()));
        a.set(1, 0, BigRational::new(1.into(), 3.into()));
        a.set(0, 1, q(3));
        // 1/2 * 1 - 3 * 1/3 = -1/2
        assert_eq!(det_exact(&a).unwrap(), BigRational::new((-1).into(), 2.into()));
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(
            det_exact(&RationalMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = 1i64 << 62;
        let rows = vec![
            vec![BigInt::from(big), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(big)],
        ];
        let expect = BigInt::from(big) * BigInt::from(big) - 1;
        assert_eq!(det_integer(rows), expect);
    }

    #[test]
    fn solve_roundtrip() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = m(&[&[1], &[2]]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
        let sing = m(&[&[1, 2], &[2, 4]]);
        assert!(sing.solve(&b).unwrap().is_none());
    }

    #[test]
    fn integer_solve() {
        let a = vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(3)],
        ];
        let x = solve_integer(&a, &[BigInt::from(1), BigInt::from(0)]).unwrap();
        assert_eq!(x, vec![BigRational::new(3.into(), 5.into()), BigRational::new((-1).into(), 5.into())]);
    }

    #[test]
    fn kron_dims() {
        let a = m(&[&[1, 2]]);
        let b = m(&[&[0], &[1]]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k, m(&[&[0, 0], &[1, 2]]));
    }

    #[test]
    fn json_roundtrip() {
        let a = m(&[&[1, -2], &[0, 7]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[["1","-2"],["0","7"]]"#);
        let back: RationalMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<RationalMatrix>(r#"[["1","x"]]"#).is_err());
        assert!(serde_json::from_str::<RationalMatrix>(r#"[["1","2"],["3"]]"#).is_err());
    }

    #[test]
    fn rank() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[1, 0, 1], &[0, 1, 1]]).rank(), 2);
    }
}
