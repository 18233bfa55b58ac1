use super::{eigen_symmetric, LinalgError, Matrix, SkewMatrix, SymMatrix, Vector};

/// One invariant rotation plane of a skew operator.
///
/// The operator acts on the plane as `omega·(u vᵀ − v uᵀ)`, that is
/// `w·u = −omega·v` and `w·v = omega·u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    pub omega: f64,
    pub u: Vector,
    pub v: Vector,
}

/// Decomposition of Rⁿ into invariant rotation planes plus the fixed subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneDecomposition {
    /// Sorted by descending `omega`.
    pub planes: Vec<Plane>,
    /// Orthonormal basis of the kernel, one vector per column.
    pub fixed_subspace: Matrix,
}

impl PlaneDecomposition {
    pub fn n(&self) -> usize {
        self.fixed_subspace.nrows()
    }

    /// `Σ ωᵢ (uᵢvᵢᵀ − vᵢuᵢᵀ)`.
    pub fn reconstruct(&self) -> SkewMatrix {
        let n = self.n();
        let mut acc = Matrix::zeros(n, n);
        for p in &self.planes {
            acc += (&p.u * p.v.transpose() - &p.v * p.u.transpose()) * p.omega;
        }
        SkewMatrix::skew_part(&acc)
    }

    /// All plane and kernel vectors as columns: `u₁, v₁, …, u_m, v_m, kernel…`.
    pub fn basis(&self) -> Matrix {
        let n = self.n();
        let mut b = Matrix::zeros(n, n);
        let mut col = 0;
        for p in &self.planes {
            b.set_column(col, &p.u);
            b.set_column(col + 1, &p.v);
            col += 2;
        }
        for k in 0..self.fixed_subspace.ncols() {
            b.set_column(col + k, &self.fixed_subspace.column(k));
        }
        b
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.planes.iter().map(|p| p.omega).collect()
    }
}

/// Canonical form of a skew-symmetric operator.
///
/// The spectrum `±iω` is read from the symmetric square `−w² = wᵀw`; each
/// plane is spanned by an eigenvector `u` of `−w²` and its image `−w u / ω`.
/// Directions with singular value `≤ tol·‖w‖` form the fixed subspace.
pub fn canonical_planes(w: &SkewMatrix, tol: f64) -> Result<PlaneDecomposition, LinalgError> {
    if !(tol > 0.0) {
        return Err(LinalgError::BadTolerance(tol));
    }
    let n = w.n();
    let wm = w.as_matrix();
    let norm = w.norm();
    let square = SymMatrix::symmetric_part(&(wm.transpose() * wm));
    let frame = eigen_symmetric(&square)?;

    let cutoff = (tol * norm).powi(2);
    let mut kernel_count = frame.eigenvalues.iter().filter(|&&s| s <= cutoff).count();
    if (n - kernel_count) % 2 == 1 {
        // tol splits a ±iω pair; keep the whole pair in the kernel
        kernel_count += 1;
    }

    let mut chosen: Vec<Vector> = Vec::with_capacity(n);
    let orthogonalize = |v: &mut Vector, against: &[Vector]| {
        for _ in 0..2 {
            for q in against {
                let r = q.dot(v);
                *v -= q * r;
            }
        }
    };

    let mut planes = Vec::new();
    for k in (kernel_count..n).rev() {
        if planes.len() * 2 == n - kernel_count {
            break;
        }
        let mut u = frame.basis.column(k).into_owned();
        orthogonalize(&mut u, &chosen);
        let un = u.norm();
        if un < 0.5 {
            continue;
        }
        u /= un;
        let mut v = -(wm * &u);
        let omega = v.norm();
        if omega == 0.0 {
            continue;
        }
        v /= omega;
        orthogonalize(&mut v, &chosen);
        let r = u.dot(&v);
        v -= &u * r;
        v /= v.norm();
        chosen.push(u.clone());
        chosen.push(v.clone());
        planes.push(Plane { omega, u, v });
    }

    let mut fixed = Matrix::zeros(n, n - 2 * planes.len());
    let mut col = 0;
    for k in 0..n {
        if col == fixed.ncols() {
            break;
        }
        let mut x = frame.basis.column(k).into_owned();
        orthogonalize(&mut x, &chosen);
        let xn = x.norm();
        if xn < 0.5 {
            continue;
        }
        x /= xn;
        fixed.set_column(col, &x);
        chosen.push(x);
        col += 1;
    }

    planes.sort_by(|a, b| b.omega.total_cmp(&a.omega));
    Ok(PlaneDecomposition {
        planes,
        fixed_subspace: fixed,
    })
}
