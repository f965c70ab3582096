//! Small dense complex linear algebra.
//!
//! Everything here works on [`DenseMatrix`], a row-major matrix of
//! `Complex64`. Sizes are expected to be small (the Hamiltonians and
//! metrics are at most 12x12, secular matrices are q x q), so the
//! algorithms favour robustness over blocking or cache tricks.

mod eigen;
mod lu;
mod svd;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigen::{eigenvalues, eigenvector, fix_phase, sort_spectrum, EIGEN_DIM_CAP};
pub use lu::{lu_determinant, Lu};
pub use svd::{singular_value_decomposition, Svd};

/// Default relative rank tolerance for [`real_null_space`].
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major complex entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a real matrix from nested rows. Panics on ragged input, which
    /// is a programming error for the literal matrices this is used with.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Self::from_fn(n_rows, n_cols, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |m - m^dagger|`; zero for Hermitian matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut defect = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                defect = defect.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        defect
    }

    /// `(m + m^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// True when every imaginary part is at most `tol` in magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|v| v.im.abs() <= tol)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn try_mul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(l, j)];
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &DenseMatrix, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<DenseMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| op(*a, *b)).collect(),
        })
    }

    pub fn try_add(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Dimension(format!(
                "{what} needs a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// The operator impls panic on shape mismatch like the std numeric types do
// on overflow in debug builds; use the `try_*` methods for fallible code.
impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for v in self.row(i) {
                write!(f, "{:>10.4}{:+.4}i ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Outcome of [`is_positive_definite`].
#[derive(Debug, Clone, PartialEq)]
pub struct Positivity {
    pub is_positive_definite: bool,
    pub min_eigenvalue: f64,
    pub hermiticity_defect: f64,
    /// Eigenvalues of the Hermitian part, ascending.
    pub eigenvalues: Vec<f64>,
}

/// Checks `0 < m = m^dagger`: Hermitian to `herm_tol` and every eigenvalue of
/// the Hermitian part above `eig_tol`.
pub fn is_positive_definite(m: &DenseMatrix, herm_tol: f64, eig_tol: f64) -> Result<Positivity> {
    m.require_square("positivity test")?;
    let defect = m.hermiticity_defect();
    let mut eigs: Vec<f64> = eigenvalues(&m.hermitian_part())?
        .into_iter()
        .map(|z| z.re)
        .collect();
    eigs.sort_by(f64::total_cmp);
    let min_eigenvalue = eigs.first().copied().unwrap_or(f64::NAN);
    Ok(Positivity {
        is_positive_definite: defect <= herm_tol && min_eigenvalue > eig_tol,
        min_eigenvalue,
        hermiticity_defect: defect,
        eigenvalues: eigs,
    })
}

/// Orthonormal basis of the kernel of a real matrix.
#[derive(Debug, Clone)]
pub struct NullSpace {
    pub basis: Vec<Vec<f64>>,
    /// All singular values of the input, descending.
    pub singular_values: Vec<f64>,
}

impl NullSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of a real matrix: right singular vectors whose singular value is
/// at most `rank_tol * ||a||_2`.
pub fn real_null_space(a: &DenseMatrix, rank_tol: f64) -> Result<NullSpace> {
    if !a.is_real(0.0) {
        return Err(Error::Argument("real_null_space needs real entries".into()));
    }
    let svd = singular_value_decomposition(a)?;
    let sigma_max = svd.singular_values.first().copied().unwrap_or(0.0);
    let cutoff = rank_tol * sigma_max;
    let basis = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cutoff)
        .map(|(idx, _)| svd.right_vectors[idx].iter().map(|z| z.re).collect())
        .collect();
    Ok(NullSpace {
        basis,
        singular_values: svd.singular_values,
    })
}
