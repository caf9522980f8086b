//! Exact linear algebra over the rationals.
//!
//! Everything here works on dense row-major matrices of [`Rational`] entries.
//! Elimination skips zero entries, so the sparse cochain matrices produced by
//! the cohomology layer reduce quickly despite the dense storage.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix does not square to the identity")]
    NotAnInvolution,
}

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(QMatrix { rows, cols, entries })
    }

    /// Integer rows, mostly for tests and small hand-written matrices.
    /// Panics on ragged input.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| rat(x)));
        }
        QMatrix { rows: r, cols: c, entries }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
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

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect())
    }

    /// `self + scale * I`; requires a square matrix.
    fn shifted_by_identity(&self, scale: &Rational) -> QMatrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = m.get(i, i) + scale;
            m.set(i, i, v);
        }
        m
    }

    pub fn rank(&self) -> usize {
        Echelon::of(self).pivots.len()
    }

    /// A basis of the null space, one vector per free column of the reduced
    /// row echelon form. The `k`-th vector has a 1 in the `k`-th free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let ech = Echelon::of(self);
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &p) in ech.pivots.iter().enumerate() {
                let x = ech.reduced.get(row, free);
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
            basis.push(v);
        }
        basis
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with the pivot column of each nonzero row.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: QMatrix,
    pub pivots: Vec<usize>,
}

fn bit_size(x: &Rational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

impl Echelon {
    /// Gauss-Jordan elimination. Within each column the pivot is the nonzero
    /// entry of smallest bit size, which keeps intermediate fractions short.
    pub fn of(m: &QMatrix) -> Echelon {
        echelon_on_prefix(m, m.cols)
    }
}

pub fn rank(m: &QMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    m.kernel_basis()
}

/// Solves `basis * c = target` for each target at once. Entry `k` of the
/// result is `Some(c)` when target `k` lies in the column span of `basis`.
/// Coefficients of redundant basis columns are set to zero.
pub fn solve_in_span(
    basis: &QMatrix,
    targets: &[Vec<Rational>],
) -> Result<Vec<Option<Vec<Rational>>>, LinalgError> {
    let n = basis.rows;
    for t in targets {
        if t.len() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: t.len(),
            });
        }
    }
    let k = basis.cols;
    let width = k + targets.len();
    let mut aug = QMatrix::zeros(n, width);
    for i in 0..n {
        for j in 0..k {
            aug.set(i, j, basis.get(i, j).clone());
        }
        for (t, target) in targets.iter().enumerate() {
            aug.set(i, k + t, target[i].clone());
        }
    }
    // Eliminate on the basis columns only so every target is expressed against them.
    let ech = echelon_on_prefix(&aug, k);
    let rank = ech.pivots.len();
    Ok((0..targets.len())
        .map(|t| {
            let col = k + t;
            if (rank..n).any(|i| !ech.reduced.get(i, col).is_zero()) {
                return None;
            }
            let mut coeffs = vec![Rational::zero(); k];
            for (row, &p) in ech.pivots.iter().enumerate() {
                coeffs[p] = ech.reduced.get(row, col).clone();
            }
            Some(coeffs)
        })
        .collect())
}

/// Gauss-Jordan restricted to choosing pivots among the first `prefix` columns;
/// the remaining columns are carried along as right-hand sides.
fn echelon_on_prefix(m: &QMatrix, prefix: usize) -> Echelon {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..prefix {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !a.get(i, c).is_zero())
            .min_by_key(|&i| bit_size(a.get(i, c)));
        let Some(p) = best else { continue };
        if p != r {
            for j in 0..cols {
                a.entries.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a.get(r, c).recip();
        for j in c..cols {
            let idx = r * cols + j;
            if !a.entries[idx].is_zero() {
                a.entries[idx] *= &inv;
            }
        }
        let pivot_row: Vec<(usize, Rational)> = (c..cols)
            .filter(|&j| !a.get(r, j).is_zero())
            .map(|j| (j, a.get(r, j).clone()))
            .collect();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c).clone();
            if factor.is_zero() {
                continue;
            }
            for (j, x) in &pivot_row {
                let idx = i * cols + j;
                a.entries[idx] -= &factor * x;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { reduced: a, pivots }
}

/// Membership test for the column span of `basis`. On success the witness `c`
/// satisfies `basis * c == v` exactly.
pub fn column_span_contains(basis: &QMatrix, v: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
    let mut out = solve_in_span(basis, &[v.to_vec()])?;
    Ok(out.pop().flatten())
}

/// Dimensions of the +1 and -1 eigenspaces of an involution.
pub fn involution_eigen_dims(t: &QMatrix) -> Result<(usize, usize), LinalgError> {
    if !t.is_square() {
        return Err(LinalgError::NotSquare {
            rows: t.rows,
            cols: t.cols,
        });
    }
    let n = t.rows;
    if t.mul(t)? != QMatrix::identity(n) {
        return Err(LinalgError::NotAnInvolution);
    }
    let plus = n - t.shifted_by_identity(&-Rational::one()).rank();
    let minus = n - t.shifted_by_identity(&Rational::one()).rank();
    debug_assert_eq!(plus + minus, n);
    Ok((plus, minus))
}

/// Scales `v` so that its first nonzero entry is 1.
pub fn normalize_leading(v: &mut [Rational]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x /= &lead;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::identity(2).rank(), 2);
        assert_eq!(QMatrix::zeros(2, 2).rank(), 0);
        assert_eq!(QMatrix::from_int_rows(&[&[1, 2], &[2, 4], &[3, 6]]).rank(), 1);
    }

    #[test]
    fn empty_matrices_have_rank_zero() {
        assert_eq!(QMatrix::zeros(0, 5).rank(), 0);
        assert_eq!(QMatrix::zeros(4, 0).rank(), 0);
        assert_eq!(QMatrix::zeros(0, 3).kernel_basis().len(), 3);
        assert!(QMatrix::zeros(3, 0).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_examples() {
        let k = QMatrix::zeros(3, 3).kernel_basis();
        assert_eq!(k.len(), 3);
        assert_eq!(QMatrix::from_columns(3, &k).unwrap().rank(), 3);

        assert!(QMatrix::identity(4).kernel_basis().is_empty());

        let k = QMatrix::from_int_rows(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.len(), 1);
        let mut w = k[0].clone();
        normalize_leading(&mut w);
        assert_eq!(w, v(&[1, -1]));
    }

    #[test]
    fn span_membership() {
        let id = QMatrix::identity(3);
        let target = v(&[4, -2, 7]);
        assert_eq!(column_span_contains(&id, &target).unwrap(), Some(target.clone()));

        let empty = QMatrix::zeros(2, 0);
        assert_eq!(column_span_contains(&empty, &v(&[0, 0])).unwrap(), Some(vec![]));
        assert_eq!(column_span_contains(&empty, &v(&[0, 1])).unwrap(), None);

        let b = QMatrix::from_int_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(column_span_contains(&b, &v(&[0, 1])).unwrap(), Some(v(&[-1, 1])));
    }

    #[test]
    fn span_dimension_mismatch() {
        let b = QMatrix::identity(2);
        assert!(matches!(
            column_span_contains(&b, &v(&[1, 2, 3])),
            Err(LinalgError::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn span_with_dependent_columns() {
        let b = QMatrix::from_int_rows(&[&[1, 2, 0], &[1, 2, 0], &[0, 0, 1]]);
        let target = v(&[3, 3, 5]);
        let c = column_span_contains(&b, &target).unwrap().unwrap();
        assert_eq!(b.mul_vec(&c).unwrap(), target);
        assert_eq!(column_span_contains(&b, &v(&[1, 0, 0])).unwrap(), None);
    }

    #[test]
    fn eigen_dims_examples() {
        assert_eq!(involution_eigen_dims(&QMatrix::identity(4)).unwrap(), (4, 0));
        let mut neg = QMatrix::identity(3);
        for i in 0..3 {
            neg.set(i, i, rat(-1));
        }
        assert_eq!(involution_eigen_dims(&neg).unwrap(), (0, 3));
        let d = QMatrix::from_int_rows(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
        assert_eq!(involution_eigen_dims(&d).unwrap(), (1, 2));
        // swap is an involution with one fixed direction
        let swap = QMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(involution_eigen_dims(&swap).unwrap(), (1, 1));
        assert_eq!(involution_eigen_dims(&QMatrix::zeros(0, 0)).unwrap(), (0, 0));
    }

    #[test]
    fn eigen_dims_rejects_non_involution() {
        let m = QMatrix::from_int_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(involution_eigen_dims(&m), Err(LinalgError::NotAnInvolution));
        let r = QMatrix::zeros(2, 3);
        assert!(matches!(involution_eigen_dims(&r), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn rational_arithmetic_stays_exact() {
        let m = QMatrix::from_entries(
            2,
            2,
            vec![rat_frac(1, 3), rat_frac(2, 7), rat_frac(2, 3), rat_frac(4, 7)],
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).unwrap().iter().all(Zero::is_zero));
    }
}
