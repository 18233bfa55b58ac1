use super::{check_square, eigen_symmetric, frobenius_norm, LinalgError, Matrix, SkewMatrix, SymMatrix};

/// Nearest orthonormal matrix to `x` in the Frobenius sense (the polar factor).
///
/// Computed as `x · (xᵀx)^{-1/2}` through the eigen-decomposition of `xᵀx`.
pub fn gram_project_orthonormal(x: &Matrix) -> Result<Matrix, LinalgError> {
    let n = check_square(x)?;
    super::check_finite(x)?;
    let gram = SymMatrix::symmetric_part(&(x.transpose() * x));
    let frame = eigen_symmetric(&gram)?;
    let mu_max = frame.eigenvalues.last().copied().unwrap_or(0.0);
    let mu_min = frame.eigenvalues.first().copied().unwrap_or(0.0);
    if n > 0 && (mu_max <= 0.0 || mu_min <= f64::EPSILON * n as f64 * mu_max) {
        return Err(LinalgError::Singular {
            sigma_min: mu_min.max(0.0).sqrt(),
        });
    }
    let mut inv_sqrt = Matrix::zeros(n, n);
    for (k, mu) in frame.eigenvalues.iter().enumerate() {
        inv_sqrt[(k, k)] = 1.0 / mu.sqrt();
    }
    let p_inv = &frame.basis * inv_sqrt * frame.basis.transpose();
    let u = x * p_inv;
    // one Newton-Schulz refinement step: u ← u(3I − uᵀu)/2
    let correction = Matrix::identity(n, n) * 3.0 - u.transpose() * &u;
    Ok(&u * correction * 0.5)
}

/// Orthogonal factor of the QR decomposition of a square matrix with the
/// convention that `R` has a positive diagonal.
///
/// Uses modified Gram–Schmidt with one re-orthogonalization pass, which
/// directly produces positive diagonal entries in `R`.
pub fn qr_positive(a: &Matrix) -> Result<Matrix, LinalgError> {
    let n = check_square(a)?;
    super::check_finite(a)?;
    let scale = frobenius_norm(a);
    let mut q = Matrix::zeros(n, n);
    for j in 0..n {
        let mut v = a.column(j).into_owned();
        for _ in 0..2 {
            for k in 0..j {
                let qk = q.column(k);
                let r = qk.dot(&v);
                v -= qk * r;
            }
        }
        let r = v.norm();
        if r <= f64::EPSILON * n as f64 * scale {
            return Err(LinalgError::Singular { sigma_min: r });
        }
        q.set_column(j, &(v / r));
    }
    Ok(q)
}

/// Matrix exponential of a skew-symmetric matrix (a rotation); scaling and
/// squaring with a degree-16 Taylor polynomial.
pub fn expm_skew(w: &SkewMatrix) -> Matrix {
    let n = w.n();
    let norm = w.norm();
    let mut squarings = 0u32;
    let mut s = 1.0;
    while norm * s > 0.25 {
        s *= 0.5;
        squarings += 1;
    }
    let a = w.as_matrix() * s;
    let mut term = Matrix::identity(n, n);
    let mut acc = Matrix::identity(n, n);
    for k in 1..=16 {
        term = &term * &a / k as f64;
        acc += &term;
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defect(q: &Matrix) -> f64 {
        let n = q.nrows();
        frobenius_norm(q.transpose() * q - Matrix::identity(n, n))
    }

    #[test]
    fn identity_projects_to_identity() {
        let i = Matrix::identity(4, 4);
        let p = gram_project_orthonormal(&i).unwrap();
        assert!(frobenius_norm(&p - &i) < 1e-15);
    }

    #[test]
    fn noisy_rotation_is_restored() {
        let w = SkewMatrix::from_upper_fn(5, |i, j| 0.3 * ((i + 3 * j) as f64).sin());
        let q = expm_skew(&w);
        let noise = Matrix::from_fn(5, 5, |i, j| 1e-3 * ((7 * i + 11 * j) as f64).cos());
        let p = gram_project_orthonormal(&(&q + noise)).unwrap();
        assert!(defect(&p) <= 1e-12);
        assert!(frobenius_norm(&p - &q) < 1e-2);
    }

    #[test]
    fn singular_input_rejected() {
        let x = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(
            gram_project_orthonormal(&x),
            Err(LinalgError::Singular { .. })
        ));
    }

    #[test]
    fn qr_factor_is_orthonormal_with_positive_r() {
        let a = Matrix::from_fn(4, 4, |i, j| ((2 * i + 5 * j) as f64).sin() + (i == j) as u8 as f64);
        let q = qr_positive(&a).unwrap();
        assert!(defect(&q) < 1e-13);
        let r = q.transpose() * &a;
        for i in 0..4 {
            assert!(r[(i, i)] > 0.0);
            for j in 0..i {
                assert!(r[(i, j)].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn exp_of_plane_generator_is_rotation() {
        let mut w = SkewMatrix::zeros(2);
        let theta = 2.5f64;
        w.set(0, 1, -theta);
        let r = expm_skew(&w);
        let expected = Matrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]);
        assert!(frobenius_norm(r - expected) < 1e-14);
    }
}
