use super::{LinalgError, Matrix};

pub const SVD_MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `A = U·diag(σ)·Vᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    /// `m × k` with `k = min(m, n)` orthonormal columns where `σ > 0`; zero
    /// columns otherwise.
    pub u: Matrix,
    /// Descending, length `k`.
    pub singular_values: Vec<f64>,
    /// `n × n` orthogonal; the first `k` columns pair with `singular_values`.
    pub v: Matrix,
}

impl Svd {
    pub fn reconstruct(&self) -> Matrix {
        let k = self.singular_values.len();
        let mut us = self.u.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.columns(0, k).transpose()
    }

    /// Number of singular values above `rel_tol·σ_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let max = self.singular_values.first().copied().unwrap_or(0.0);
        if max == 0.0 {
            return 0;
        }
        self.singular_values.iter().filter(|&&s| s > rel_tol * max).count()
    }

    /// Columns of `V` spanning the numerical null space at `rel_tol`.
    pub fn null_space(&self, rel_tol: f64) -> Matrix {
        let r = self.rank(rel_tol);
        let n = self.v.ncols();
        self.v.columns(r, n - r).into_owned()
    }

    /// Columns of `U` spanning the numerical range at `rel_tol`.
    pub fn range(&self, rel_tol: f64) -> Matrix {
        self.u.columns(0, self.rank(rel_tol)).into_owned()
    }
}

/// One-sided (Hestenes) Jacobi SVD. Accurate to high relative precision in
/// the small singular values, which is what rank decisions need.
pub fn svd_jacobi(a: &Matrix) -> Result<Svd, LinalgError> {
    let (m, n) = a.shape();
    if let Some((row, col)) = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !a[(i, j)].is_finite())
    {
        return Err(LinalgError::NonFinite { row, col });
    }
    // work on the taller orientation so that n ≤ m
    if n > m {
        let t = svd_jacobi(&a.transpose())?;
        return Ok(transpose_svd(t, m, n));
    }
    let mut w = a.clone();
    let mut v = Matrix::identity(n, n);
    let tol = f64::EPSILON * (m as f64).sqrt();
    let mut converged = n < 2;
    let mut last_off = 0.0;
    for _ in 0..SVD_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma == 0.0 || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let rel = gamma.abs() / (alpha * beta).sqrt();
                off = off.max(rel);
                if rel <= tol {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        last_off = off;
        if off <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            sweeps: SVD_MAX_SWEEPS,
            off: last_off,
        });
    }

    let mut order: Vec<(f64, usize)> = (0..n).map(|j| (w.column(j).norm(), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut u = Matrix::zeros(m, n);
    let mut vs = Matrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &(s, j)) in order.iter().enumerate() {
        sigma.push(s);
        if s > 0.0 {
            u.set_column(k, &(w.column(j) / s));
        }
        vs.set_column(k, &v.column(j));
    }
    Ok(Svd {
        u,
        singular_values: sigma,
        v: vs,
    })
}

fn rotate(x: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..x.nrows() {
        let (xp, xq) = (x[(i, p)], x[(i, q)]);
        x[(i, p)] = c * xp - s * xq;
        x[(i, q)] = s * xp + c * xq;
    }
}

/// From the SVD of `Aᵀ` (an `n × m` matrix, `m < n`) to the SVD of `A`.
fn transpose_svd(t: Svd, m: usize, n: usize) -> Svd {
    // Aᵀ = U Σ Vᵀ  ⇒  A = V Σ Uᵀ; V (m×m) becomes U, U (n×m) is completed to n×n
    let mut cols: Vec<nalgebra::DVector<f64>> = (0..m).map(|j| t.u.column(j).into_owned()).collect();
    for (j, col) in cols.iter_mut().enumerate() {
        if t.singular_values[j] == 0.0 {
            *col = nalgebra::DVector::zeros(n);
        }
    }
    let mut basis: Vec<nalgebra::DVector<f64>> = cols.iter().filter(|c| c.norm() > 0.5).cloned().collect();
    let mut e = 0;
    while basis.len() < n && e < n {
        let mut x = nalgebra::DVector::zeros(n);
        x[e] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let r = b.dot(&x);
                x -= b * r;
            }
        }
        let nrm = x.norm();
        if nrm > 0.5 {
            basis.push(x / nrm);
        }
        e += 1;
    }
    // keep the pairing: columns with σ > 0 first, in order, then the completion
    let mut v = Matrix::zeros(n, n);
    for (k, b) in basis.iter().enumerate() {
        v.set_column(k, b);
    }
    let mut u = Matrix::zeros(m, m);
    for j in 0..m {
        if t.singular_values[j] > 0.0 {
            u.set_column(j, &t.v.column(j));
        }
    }
    Svd {
        u,
        singular_values: t.singular_values,
        v,
    }
}
