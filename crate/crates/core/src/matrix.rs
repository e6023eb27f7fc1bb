//! Dense complex matrices, tolerances, and the Schur (entrywise) product.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Result, SchurError};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Default relative threshold.
pub const DEFAULT_REL: f64 = 1e-10;
/// Default absolute floor.
pub const DEFAULT_ABS: f64 = 1e-12;

/// A relative threshold paired with an absolute floor.
///
/// [`Tolerance::bound`] turns a problem scale into a concrete threshold:
/// `max(rel * scale, abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    rel: f64,
    abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !rel.is_finite() || !abs.is_finite() {
            return Err(SchurError::InvalidTolerance(format!(
                "components must be finite (rel={rel}, abs={abs})"
            )));
        }
        if rel < 0.0 || abs < 0.0 {
            return Err(SchurError::InvalidTolerance(format!(
                "components must be nonnegative (rel={rel}, abs={abs})"
            )));
        }
        if rel == 0.0 && abs == 0.0 {
            return Err(SchurError::InvalidTolerance(
                "at least one component must be positive".into(),
            ));
        }
        Ok(Self { rel, abs })
    }

    /// Relative tolerance `rel` with the default absolute floor scaled down
    /// alongside it.
    pub fn relative(rel: f64) -> Result<Self> {
        Self::new(rel, (rel * 1e-2).min(DEFAULT_ABS))
    }

    pub fn rel(&self) -> f64 {
        self.rel
    }

    pub fn abs(&self) -> f64 {
        self.abs
    }

    /// Threshold for a quantity whose natural magnitude is `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        (self.rel * scale).max(self.abs)
    }

    /// `max(rel, abs)`: the threshold for dimensionless quantities of order one.
    pub fn unit(&self) -> f64 {
        self.rel.max(self.abs)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: DEFAULT_REL,
            abs: DEFAULT_ABS,
        }
    }
}

/// Dense, row-major complex matrix. Entries are always finite.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking the length and that
    /// every entry is finite.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(SchurError::InvalidDimensions(format!(
                "{rows}x{cols}: both dimensions must be positive"
            )));
        }
        if data.len() != rows * cols {
            return Err(SchurError::InvalidDimensions(format!(
                "{rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SchurError::NonFinite {
                row: pos / cols + 1,
                col: pos % cols + 1,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(SchurError::InvalidDimensions("ragged rows".into()));
        }
        Self::from_row_major(r, c, rows.iter().flatten().copied().collect())
    }

    /// Builds a real matrix from nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let nested: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&nested)
    }

    /// Builds a matrix entry by entry with 0-based `(i, j)`.
    ///
    /// Panics if the closure yields a non-finite value or a dimension is zero;
    /// use [`ComplexMatrix::from_row_major`] for untrusted data.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_row_major(rows, cols, data).expect("from_fn produced a non-finite entry")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(
            n,
            n,
            |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) },
        )
    }

    /// The all-ones matrix `J`, the identity for the Schur product.
    pub fn ones(n: usize) -> Self {
        Self::ones_rect(n, n)
    }

    pub fn ones_rect(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| C64::new(1.0, 0.0))
    }

    /// Matrix unit `E_ij` of size `n` (0-based indices).
    pub fn matrix_unit(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n, "matrix unit index out of range");
        Self::from_fn(n, n, |r, c| {
            if r == i && c == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Returns `n` if square, otherwise a `NotSquare` error tagged with `op`.
    pub fn require_square(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(SchurError::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn trace(&self) -> C64 {
        self.diag().into_iter().sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| f(self[(i, j)]))
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape("add", other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)]))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape("sub", other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)]))
    }

    /// Ordinary matrix product.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(SchurError::ShapeMismatch {
                op: "matmul",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.rows * other.cols];
        for i in 0..self.rows {
            let out_row = &mut out[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data: out,
        })
    }

    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.cols {
            return Err(SchurError::ShapeMismatch {
                op: "matvec",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: x.len(),
                right_cols: 1,
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |a_ij|`, the sup-norm over coefficients.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Frobenius norm of `A - A*`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Largest deviation of a diagonal entry from 1.
    pub fn unit_diagonal_defect(&self) -> f64 {
        self.diag()
            .iter()
            .map(|d| (d - C64::new(1.0, 0.0)).norm())
            .fold(0.0, f64::max)
    }

    /// Leading principal `k x k` submatrix.
    pub fn leading(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.rows && k <= self.cols);
        Self::from_fn(k, k, |i, j| self[(i, j)])
    }

    fn same_shape(&self, op: &'static str, other: &Self) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(SchurError::ShapeMismatch {
                op,
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|z| format!("{z:.6}")).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Entrywise (Schur / Hadamard) product `A ∘ B`.
pub fn schur_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.same_shape("schur_product", b)?;
    Ok(ComplexMatrix::from_fn(a.rows, a.cols, |i, j| a[(i, j)] * b[(i, j)]))
}

/// Entrywise reciprocal `A^[-1]`.
///
/// Fails on the first entry (row-major order) whose modulus does not exceed
/// the absolute floor of `tol`.
pub fn schur_inverse(a: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    for i in 0..a.rows {
        for j in 0..a.cols {
            if a[(i, j)].norm() <= tol.abs() {
                return Err(SchurError::ZeroEntry { row: i + 1, col: j + 1 });
            }
        }
    }
    ComplexMatrix::from_row_major(a.rows, a.cols, a.data.iter().map(|z| z.inv()).collect())
}

/// Schur map `S_A(B) = A ∘ B`.
pub fn schur_map(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    schur_product(a, b)
}
