use super::{check_finite, LinalgError, Matrix, SymMatrix, Vector};

/// Sweep cap for the cyclic Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Orthonormal eigen-decomposition of a symmetric matrix.
///
/// Eigenvalues are ascending; column `k` of `basis` is the eigenvector for
/// `eigenvalues[k]`, with its first non-negligible component positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFrame {
    pub eigenvalues: Vec<f64>,
    pub basis: Matrix,
}

impl EigenFrame {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `basis · diag(eigenvalues) · basisᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let d = Matrix::from_diagonal(&Vector::from_column_slice(&self.eigenvalues));
        &self.basis * d * self.basis.transpose()
    }

    /// Expresses `a` in the eigenframe: `basisᵀ · a · basis`.
    pub fn to_frame(&self, a: &Matrix) -> Matrix {
        self.basis.transpose() * a * &self.basis
    }

    /// Returns `a` from eigenframe coordinates: `basis · a · basisᵀ`.
    pub fn from_frame(&self, a: &Matrix) -> Matrix {
        &self.basis * a * self.basis.transpose()
    }
}

/// Cyclic Jacobi eigen-solver for a symmetric matrix.
pub fn eigen_symmetric(s: &SymMatrix) -> Result<EigenFrame, LinalgError> {
    let mut a = s.as_matrix().clone();
    check_finite(&a)?;
    let n = a.nrows();
    let mut v = Matrix::identity(n, n);
    let scale = super::frobenius_norm(&a);

    let off = |a: &Matrix| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                acc += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        acc.sqrt()
    };

    let target = f64::EPSILON * scale;
    let mut sweeps = 0;
    while scale > 0.0 && off(&a) > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps, off: off(&a) });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // rotation angle zeroing (p, q)
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps ties in index order
    order.sort_by(|&x, &y| a[(x, x)].total_cmp(&a[(y, y)]));

    let eigenvalues = order.iter().map(|&k| a[(k, k)]).collect();
    let mut basis = Matrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut vec = v.column(k).into_owned();
        if let Some(first) = vec.iter().find(|x| x.abs() > SIGN_THRESHOLD) {
            if *first < 0.0 {
                vec = -vec;
            }
        }
        basis.set_column(col, &vec);
    }
    Ok(EigenFrame { eigenvalues, basis })
}

/// Components below this magnitude are skipped when fixing eigenvector signs.
const SIGN_THRESHOLD: f64 = 1e-12;
