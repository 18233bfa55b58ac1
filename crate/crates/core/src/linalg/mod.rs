//! Dense linear algebra for small dimensions.
//!
//! Matrices are stored as [`nalgebra::DMatrix<f64>`]. The symmetric and
//! skew-symmetric newtypes keep their structure by construction: every write
//! to `(i, j)` also writes the mirrored entry, so an asymmetric instance
//! cannot be built through the public API.

mod eigen;
mod ortho;
mod planes;
mod svd;

pub use eigen::{eigen_symmetric, EigenFrame, JACOBI_MAX_SWEEPS};
pub use ortho::{expm_skew, gram_project_orthonormal, qr_positive};
pub use planes::{canonical_planes, Plane, PlaneDecomposition};
pub use svd::{svd_jacobi, Svd, SVD_MAX_SWEEPS};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Dense real matrix used throughout the crate.
pub type Matrix = DMatrix<f64>;
/// Dense real column vector.
pub type Vector = DVector<f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry ({row}, {col}) breaks {kind} structure: {a} vs {b}")]
    Structure {
        kind: &'static str,
        row: usize,
        col: usize,
        a: f64,
        b: f64,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("matrix is numerically singular (smallest singular value {sigma_min:e})")]
    Singular { sigma_min: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

fn check_square(m: &Matrix) -> Result<usize, LinalgError> {
    if m.nrows() != m.ncols() {
        return Err(LinalgError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

fn check_finite(m: &Matrix) -> Result<(), LinalgError> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(LinalgError::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self(Matrix::from_diagonal(&Vector::from_column_slice(diag)))
    }

    /// Builds from a function evaluated on the upper triangle `i <= j`.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut s = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                s.set(i, j, f(i, j));
            }
        }
        s
    }

    /// Accepts a matrix that is exactly symmetric with finite entries.
    pub fn from_matrix(m: Matrix) -> Result<Self, LinalgError> {
        let n = check_square(&m)?;
        check_finite(&m)?;
        for i in 0..n {
            for j in (i + 1)..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(LinalgError::Structure {
                        kind: "symmetric",
                        row: i,
                        col: j,
                        a: m[(i, j)],
                        b: m[(j, i)],
                    });
                }
            }
        }
        Ok(Self(m))
    }

    /// Symmetric part `(a + aᵀ)/2`.
    pub fn symmetric_part(a: &Matrix) -> Self {
        let n = a.nrows();
        Self::from_upper_fn(n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[(i, j)] = v;
        self.0[(j, i)] = v;
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

impl AsMatrix for SymMatrix {
    fn as_mat(&self) -> &Matrix {
        &self.0
    }
}

/// Real skew-symmetric matrix, an element of so(n).
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix(Matrix);

impl SkewMatrix {
    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n, n))
    }

    /// Builds from a function evaluated on the strict upper triangle `i < j`.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut s = Self::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                s.set(i, j, f(i, j));
            }
        }
        s
    }

    /// Accepts a matrix that is exactly skew-symmetric with finite entries.
    pub fn from_matrix(m: Matrix) -> Result<Self, LinalgError> {
        let n = check_square(&m)?;
        check_finite(&m)?;
        for i in 0..n {
            for j in i..n {
                if m[(i, j)] != -m[(j, i)] {
                    return Err(LinalgError::Structure {
                        kind: "skew-symmetric",
                        row: i,
                        col: j,
                        a: m[(i, j)],
                        b: m[(j, i)],
                    });
                }
            }
        }
        Ok(Self(m))
    }

    /// Skew part `(a - aᵀ)/2`.
    pub fn skew_part(a: &Matrix) -> Self {
        let n = a.nrows();
        Self::from_upper_fn(n, |i, j| 0.5 * (a[(i, j)] - a[(j, i)]))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Sets `(i, j)` to `v` and `(j, i)` to `-v`. Diagonal writes are ignored.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        if i == j {
            return;
        }
        self.0[(i, j)] = v;
        self.0[(j, i)] = -v;
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn norm(&self) -> f64 {
        frobenius_norm(&self.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &SkewMatrix) -> Self {
        Self(&self.0 + &other.0 * s)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Conjugation `q · self · qᵀ`, re-skewed to remove rounding asymmetry.
    pub fn conjugate(&self, q: &Matrix) -> Self {
        Self::skew_part(&(q * &self.0 * q.transpose()))
    }

    /// Entries of the strict upper triangle, row-major.
    pub fn upper_entries(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    /// Coordinates in the orthonormal basis `(Eᵢⱼ − Eⱼᵢ)/√2`, `i < j` lexicographic.
    pub fn to_coords(&self) -> Vector {
        Vector::from_iterator(
            so_dim(self.n()),
            self.upper_entries().into_iter().map(|v| v * std::f64::consts::SQRT_2),
        )
    }

    /// Inverse of [`SkewMatrix::to_coords`].
    pub fn from_coords(n: usize, coords: &Vector) -> Self {
        assert_eq!(coords.len(), so_dim(n), "coordinate length");
        let mut idx = 0;
        Self::from_upper_fn(n, |_, _| {
            let v = coords[idx] * std::f64::consts::FRAC_1_SQRT_2;
            idx += 1;
            v
        })
    }
}

impl AsMatrix for SkewMatrix {
    fn as_mat(&self) -> &Matrix {
        &self.0
    }
}

/// Borrowed view of the underlying dense matrix.
pub trait AsMatrix {
    fn as_mat(&self) -> &Matrix;
}

impl AsMatrix for Matrix {
    fn as_mat(&self) -> &Matrix {
        self
    }
}

impl<T: AsMatrix + ?Sized> AsMatrix for &T {
    fn as_mat(&self) -> &Matrix {
        (**self).as_mat()
    }
}

/// Dimension of so(n).
pub fn so_dim(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `a·b − b·a`.
pub fn commutator(a: impl AsMatrix, b: impl AsMatrix) -> Result<Matrix, LinalgError> {
    let (a, b) = (a.as_mat(), b.as_mat());
    let na = check_square(a)?;
    let nb = check_square(b)?;
    if na != nb {
        return Err(LinalgError::DimensionMismatch { left: na, right: nb });
    }
    Ok(a * b - b * a)
}

pub fn frobenius_norm(a: impl AsMatrix) -> f64 {
    a.as_mat().iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Largest absolute entry.
pub fn max_abs(a: impl AsMatrix) -> f64 {
    a.as_mat().iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}
