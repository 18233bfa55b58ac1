//! Numerical probes around equilibria: linearization of the flow, the
//! orbit-tangent equilibrium kernel, and perturbation growth.
//!
//! Operators on so(n) are written in the orthonormal basis
//! `(Eᵢⱼ − Eⱼᵢ)/√2`, `i < j` in lexicographic order.

use crate::body::{inertia_invert, step_rk4, vector_field, BodyError, BodyState, InertiaSpec};
use crate::equilibria::{is_equilibrium, EquilibriumError, DEFAULT_TOL};
use crate::linalg::{commutator, qr_positive, so_dim, svd_jacobi, Matrix, SkewMatrix, Svd, Vector};
use nalgebra::linalg::Schur;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default relative rank threshold for singular values.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error("not an equilibrium: residual {residual:e}")]
    NotAnEquilibrium { residual: f64 },
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}

fn require_equilibrium(m: &SkewMatrix, body: &InertiaSpec) -> Result<(), StabilityError> {
    let check = is_equilibrium(m, body, DEFAULT_TOL)?;
    if !check.equilibrium {
        return Err(StabilityError::NotAnEquilibrium {
            residual: check.residual,
        });
    }
    Ok(())
}

fn basis_element(n: usize, c: usize) -> SkewMatrix {
    let mut e = Vector::zeros(so_dim(n));
    e[c] = 1.0;
    SkewMatrix::from_coords(n, &e)
}

/// Matrix of a linear map on so(n) from its action on basis elements.
fn operator_matrix(
    n: usize,
    mut apply: impl FnMut(&SkewMatrix) -> Result<SkewMatrix, StabilityError>,
) -> Result<Matrix, StabilityError> {
    let d = so_dim(n);
    let mut out = Matrix::zeros(d, d);
    for c in 0..d {
        let image = apply(&basis_element(n, c))?;
        out.set_column(c, &image.to_coords());
    }
    Ok(out)
}

/// Exact derivative of the vector field at `m`:
/// `δM ↦ [δM, Ω] + [M, 𝒥⁻¹(δM)]`.
pub fn jacobian(m: &SkewMatrix, body: &InertiaSpec) -> Result<Matrix, StabilityError> {
    let omega = inertia_invert(m, body)?;
    operator_matrix(m.n(), |dm| {
        let dw = inertia_invert(dm, body)?;
        let a = commutator(dm, &omega).map_err(BodyError::from)?;
        let b = commutator(m, &dw).map_err(BodyError::from)?;
        Ok(SkewMatrix::skew_part(&(a + b)))
    })
}

/// Central finite-difference Jacobian of the vector field with step `h`.
pub fn jacobian_fd(m: &SkewMatrix, body: &InertiaSpec, h: f64) -> Result<Matrix, StabilityError> {
    operator_matrix(m.n(), |dm| {
        let plus = vector_field(&m.axpy(h, dm), body)?;
        let minus = vector_field(&m.axpy(-h, dm), body)?;
        Ok(plus.axpy(-1.0, &minus).scale(0.5 / h))
    })
}

/// Matrix of `ξ ↦ [ξ, M]` (the infinitesimal coadjoint action).
pub fn adjoint_matrix(m: &SkewMatrix) -> Result<Matrix, StabilityError> {
    operator_matrix(m.n(), |xi| {
        Ok(SkewMatrix::skew_part(&commutator(xi, m).map_err(BodyError::from)?))
    })
}

/// Retries after this many failed Schur attempts give up.
const SCHUR_RETRIES: u64 = 4;

fn eigenvalues(a: &Matrix) -> Result<Vec<Complex64>, StabilityError> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    // nalgebra's Schur can stall on exactly decoupled block structure; a
    // seeded orthogonal similarity leaves the spectrum unchanged
    let mut schur = Schur::try_new(a.clone(), f64::EPSILON, MAX_ITERATIONS);
    for seed in 0..SCHUR_RETRIES {
        if schur.is_some() {
            break;
        }
        let q = seeded_orthogonal(a.nrows(), seed)?;
        log::debug!("Schur stalled; retrying under orthogonal similarity {seed}");
        schur = Schur::try_new(q.transpose() * a * &q, f64::EPSILON, MAX_ITERATIONS);
    }
    let schur = schur.ok_or(StabilityError::NoConvergence("Schur eigensolver"))?;
    let mut eig: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    eig.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(eig)
}

fn seeded_orthogonal(d: usize, seed: u64) -> Result<Matrix, StabilityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Matrix::from_fn(d, d, |_, _| StandardNormal.sample(&mut rng));
    qr_positive(&g).map_err(|_| StabilityError::NoConvergence("orthogonal sampling"))
}

fn svd(a: &Matrix) -> Result<Svd, StabilityError> {
    svd_jacobi(a).map_err(|_| StabilityError::NoConvergence("Jacobi SVD"))
}

/// Orthonormal basis (columns) of the numerical kernel of `a`, the full
/// descending singular values, and the rank.
fn kernel_basis(a: &Matrix, rank_tol: f64) -> Result<(Matrix, Vec<f64>, usize), StabilityError> {
    if a.ncols() == 0 {
        return Ok((Matrix::zeros(0, 0), Vec::new(), 0));
    }
    let s = svd(a)?;
    let rank = s.rank(rank_tol);
    let mut sigma = s.singular_values.clone();
    sigma.resize(a.ncols(), 0.0);
    Ok((s.null_space(rank_tol), sigma, rank))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearizationReport {
    pub dim: usize,
    /// Row-major operator matrix.
    pub matrix: Vec<Vec<f64>>,
    /// Eigenvalues as `[re, im]`, sorted by real then imaginary part.
    pub spectrum: Vec<[f64; 2]>,
    pub max_real_part: f64,
    /// `‖analytic − finite difference‖_F / max(‖analytic‖_F, 1e-300)`.
    pub fd_relative_deviation: f64,
    pub fd_step: f64,
}

impl LinearizationReport {
    pub fn operator(&self) -> Matrix {
        let d = self.dim;
        Matrix::from_fn(d, d, |i, j| self.matrix[i][j])
    }
}

fn to_rows(a: &Matrix) -> Vec<Vec<f64>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect())
        .collect()
}

/// Linearization of the flow at an equilibrium, cross-checked against
/// central finite differences with step `1e-6·max(‖M‖, 1)`.
pub fn linearize(m_eq: &SkewMatrix, body: &InertiaSpec) -> Result<LinearizationReport, StabilityError> {
    require_equilibrium(m_eq, body)?;
    let analytic = jacobian(m_eq, body)?;
    let h = 1e-6 * m_eq.norm().max(1.0);
    let fd = jacobian_fd(m_eq, body, h)?;
    let scale = analytic.norm().max(1e-300);
    let fd_relative_deviation = (&analytic - &fd).norm() / scale;
    let eig = eigenvalues(&analytic)?;
    let max_real_part = eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(LinearizationReport {
        dim: analytic.nrows(),
        matrix: to_rows(&analytic),
        spectrum: eig.iter().map(|z| [z.re, z.im]).collect(),
        max_real_part: if eig.is_empty() { 0.0 } else { max_real_part },
        fd_relative_deviation,
        fd_step: h,
    })
}

/// Eigenvalues of the linearization restricted to the orbit tangent space
/// `{[ξ, M]}`, which the linearized flow preserves.
pub fn tangent_spectrum(
    m_eq: &SkewMatrix,
    body: &InertiaSpec,
    rank_tol: f64,
) -> Result<Vec<Complex64>, StabilityError> {
    require_equilibrium(m_eq, body)?;
    let lin = jacobian(m_eq, body)?;
    let ad = adjoint_matrix(m_eq)?;
    let d = ad.nrows();
    if d == 0 {
        return Ok(Vec::new());
    }
    // tangent basis: left singular vectors of ad with non-negligible σ
    let basis = svd(&ad)?.range(rank_tol);
    let restricted = basis.transpose() * lin * &basis;
    eigenvalues(&restricted)
}

/// Largest distance from an eigenvalue `λ` to the nearest `−λ` in the same
/// list, relative to `max(|λ|, 1e-300)` over the list.
pub fn spectrum_symmetry_defect(eig: &[Complex64]) -> f64 {
    let scale = eig.iter().map(|z| z.norm()).fold(1e-300, f64::max);
    eig.iter()
        .map(|z| eig.iter().map(|w| (z + w).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
        / scale
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitKernelReport {
    pub map_rank: usize,
    pub kernel_dim: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub rank_tol: f64,
    /// Dimension of `{ξ : [ξ, M] = 0}` at the same relative threshold.
    pub stabilizer_dim: usize,
    pub stabilizer_singular_values: Vec<f64>,
}

impl OrbitKernelReport {
    /// `kernel_dim − stabilizer_dim`; positive values certify non-isolated equilibria.
    pub fn excess(&self) -> isize {
        self.kernel_dim as isize - self.stabilizer_dim as isize
    }
}

/// Kernel of `ξ ↦ D(vector_field)(M)·[ξ, M]`: orbit directions along which
/// the equilibrium residual stays zero to first order.
pub fn orbit_kernel(m_eq: &SkewMatrix, body: &InertiaSpec, rank_tol: f64) -> Result<OrbitKernelReport, StabilityError> {
    if !(rank_tol > 0.0) {
        return Err(StabilityError::BadParameter(format!(
            "rank_tol must be positive, got {rank_tol}"
        )));
    }
    require_equilibrium(m_eq, body)?;
    let lin = jacobian(m_eq, body)?;
    let ad = adjoint_matrix(m_eq)?;
    let map = lin * &ad;
    let (_, singular_values, map_rank) = kernel_basis(&map, rank_tol)?;
    let (_, stab_sigma, stab_rank) = kernel_basis(&ad, rank_tol)?;
    let d = map.ncols();
    log::debug!("orbit kernel singular values {singular_values:?}; stabilizer {stab_sigma:?}");
    Ok(OrbitKernelReport {
        map_rank,
        kernel_dim: d - map_rank,
        singular_values,
        rank_tol,
        stabilizer_dim: d - stab_rank,
        stabilizer_singular_values: stab_sigma,
    })
}

/// Unit directions `ξ` in the orbit kernel with `[ξ, M] ≠ 0`, orthogonal to
/// the stabilizer within the kernel.
pub fn excess_kernel_directions(
    m_eq: &SkewMatrix,
    body: &InertiaSpec,
    rank_tol: f64,
) -> Result<Vec<SkewMatrix>, StabilityError> {
    require_equilibrium(m_eq, body)?;
    let n = m_eq.n();
    let lin = jacobian(m_eq, body)?;
    let ad = adjoint_matrix(m_eq)?;
    let (ker, _, _) = kernel_basis(&(lin * &ad), rank_tol)?;
    if ker.ncols() == 0 {
        return Ok(Vec::new());
    }
    // directions in ker whose orbit image is non-zero
    let image = svd(&(&ad * &ker))?;
    let ad_scale = svd(&ad)?.singular_values.first().copied().unwrap_or(0.0);
    let mut out = Vec::new();
    for (k, sigma) in image.singular_values.iter().enumerate() {
        if *sigma > rank_tol.sqrt() * ad_scale {
            let xi = SkewMatrix::from_coords(n, &(&ker * image.v.column(k)));
            let nrm = xi.norm();
            out.push(xi.scale(1.0 / nrm));
        }
    }
    Ok(out)
}

/// `exp(sξ)·M·exp(−sξ)`.
pub fn orbit_move(m: &SkewMatrix, xi: &SkewMatrix, s: f64) -> SkewMatrix {
    let g = crate::linalg::expm_skew(&xi.scale(s));
    m.conjugate(&g)
}

/// Order of the equilibrium residual along `s ↦ orbit_move(m, ξ, s)`,
/// estimated as `log₂(r(s)/r(s/2))`. About 2 along kernel directions and 1
/// along other orbit directions. `None` when both residuals vanish.
pub fn residual_decay_slope(
    m_eq: &SkewMatrix,
    body: &InertiaSpec,
    xi: &SkewMatrix,
    s: f64,
) -> Result<Option<f64>, StabilityError> {
    let r = |s: f64| -> Result<f64, StabilityError> {
        Ok(is_equilibrium(&orbit_move(m_eq, xi, s), body, DEFAULT_TOL)?.residual)
    };
    let (a, b) = (r(s)?, r(0.5 * s)?);
    if a == 0.0 || b == 0.0 {
        return Ok(None);
    }
    Ok(Some((a / b).log2()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSettings {
    pub eps: f64,
    pub horizon: f64,
    pub exit_factor: f64,
    /// Step size; defaults to `min(1e-2, 0.05/‖Ω‖_F)`.
    pub dt: Option<f64>,
    pub seed: u64,
    /// Record the deviation every this many steps.
    pub record_every: usize,
}

impl ProbeSettings {
    pub fn new(eps: f64, horizon: f64, exit_factor: f64) -> Self {
        Self {
            eps,
            horizon,
            exit_factor,
            dt: None,
            seed: 0,
            record_every: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub escaped: bool,
    pub exit_time: Option<f64>,
    pub dt: f64,
    pub max_deviation: f64,
    /// `(t, ‖M(t) − M_eq‖)`.
    pub growth_curve: Vec<(f64, f64)>,
}

/// Unit-norm skew matrix with standard Gaussian upper-triangle entries
/// drawn from `ChaCha8Rng::seed_from_u64(seed)` in row-major order.
pub fn random_unit_skew(n: usize, seed: u64) -> SkewMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = SkewMatrix::from_upper_fn(n, |_, _| StandardNormal.sample(&mut rng));
    let nrm = a.norm();
    if nrm > 0.0 {
        a.scale(1.0 / nrm)
    } else {
        a
    }
}

/// Integrates from `m_eq + eps·ξ` (ξ a seeded random unit skew matrix) and
/// reports whether `‖M(t) − m_eq‖` reaches `exit_factor·eps` before `horizon`.
pub fn instability_probe(
    m_eq: &SkewMatrix,
    body: &InertiaSpec,
    settings: &ProbeSettings,
) -> Result<ProbeReport, StabilityError> {
    let ProbeSettings {
        eps,
        horizon,
        exit_factor,
        seed,
        record_every,
        ..
    } = *settings;
    if !(eps > 0.0) || !(exit_factor > 1.0) || !(horizon > 0.0) || record_every == 0 {
        return Err(StabilityError::BadParameter(format!(
            "need eps > 0, exit_factor > 1, horizon > 0, record_every >= 1 (got {eps}, {exit_factor}, {horizon}, {record_every})"
        )));
    }
    let n = m_eq.n();
    let start = m_eq.axpy(eps, &random_unit_skew(n, seed));
    let omega_norm = inertia_invert(&start, body)?.norm();
    let dt = settings.dt.unwrap_or_else(|| {
        if omega_norm > 0.0 {
            (0.05 / omega_norm).min(1e-2)
        } else {
            1e-2
        }
    });
    if !(dt > 0.0) {
        return Err(StabilityError::BadParameter(format!("dt must be positive, got {dt}")));
    }
    let steps = (horizon / dt).ceil() as usize;
    let threshold = exit_factor * eps;
    let mut state = BodyState::new(start);
    let deviation = |s: &BodyState| (s.m.as_matrix() - m_eq.as_matrix()).norm();
    let d0 = deviation(&state);
    let mut curve = vec![(0.0, d0)];
    let mut max_deviation = d0;
    let mut exit_time = None;
    for k in 1..=steps {
        state = step_rk4(&state, body, dt)?;
        let t = k as f64 * dt;
        let d = deviation(&state);
        max_deviation = max_deviation.max(d);
        if d >= threshold {
            exit_time = Some(t);
            curve.push((t, d));
            break;
        }
        if k % record_every == 0 || k == steps {
            curve.push((t, d));
        }
    }
    Ok(ProbeReport {
        escaped: exit_time.is_some(),
        exit_time,
        dt,
        max_deviation,
        growth_curve: curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::inertia_apply;

    fn plane_rotation(n: usize, i: usize, j: usize, w: f64) -> SkewMatrix {
        let mut o = SkewMatrix::zeros(n);
        o.set(i, j, w);
        o
    }

    fn body3() -> InertiaSpec {
        InertiaSpec::from_eigenvalues(&[1.0, 2.0, 3.0]).unwrap()
    }

    #[test]
    fn zero_momentum_linearizes_to_zero() {
        let body = body3();
        let rep = linearize(&SkewMatrix::zeros(3), &body).unwrap();
        assert!(rep.matrix.iter().flatten().all(|v| *v == 0.0));
        assert!(rep.spectrum.iter().all(|z| z[0] == 0.0 && z[1] == 0.0));
        let k = orbit_kernel(&SkewMatrix::zeros(3), &body, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(k.kernel_dim, 3);
        assert_eq!(k.map_rank, 0);
    }

    #[test]
    fn middle_axis_is_hyperbolic() {
        // the (0, 2) plane has the middle principal moment λ₀ + λ₂ = 4
        let body = body3();
        let m = inertia_apply(&plane_rotation(3, 0, 2, 1.0), &body).unwrap();
        let rep = linearize(&m, &body).unwrap();
        assert!(rep.max_real_part > 0.1);
        assert!(rep.fd_relative_deviation < 1e-5);
        for (i, j) in [(1, 2), (0, 1)] {
            let m = inertia_apply(&plane_rotation(3, i, j, 1.0), &body).unwrap();
            let rep = linearize(&m, &body).unwrap();
            assert!(rep.max_real_part.abs() < 1e-12, "{:?}", rep.spectrum);
        }
    }

    #[test]
    fn rejects_non_equilibrium() {
        let body = body3();
        let m = SkewMatrix::from_upper_fn(3, |i, j| (i + j) as f64 + 1.0);
        assert!(matches!(
            linearize(&m, &body),
            Err(StabilityError::NotAnEquilibrium { .. })
        ));
        assert!(matches!(
            orbit_kernel(&m, &body, 1e-8),
            Err(StabilityError::NotAnEquilibrium { .. })
        ));
        assert!(orbit_kernel(&SkewMatrix::zeros(3), &body, 0.0).is_err());
    }

    #[test]
    fn probe_parameters_validated() {
        let body = body3();
        let m = SkewMatrix::zeros(3);
        assert!(instability_probe(&m, &body, &ProbeSettings::new(0.0, 1.0, 10.0)).is_err());
        assert!(instability_probe(&m, &body, &ProbeSettings::new(1e-6, 1.0, 1.0)).is_err());
    }

    #[test]
    fn random_unit_skew_is_unit_and_seeded() {
        let a = random_unit_skew(5, 3);
        assert!((a.norm() - 1.0).abs() < 1e-14);
        assert_eq!(a, random_unit_skew(5, 3));
        assert_ne!(a, random_unit_skew(5, 4));
    }

    #[test]
    fn symmetry_defect_of_symmetric_list() {
        let eig = [
            Complex64::new(0.5, 1.0),
            Complex64::new(-0.5, -1.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(0.0, -2.0),
        ];
        assert!(spectrum_symmetry_defect(&eig) < 1e-15);
        assert!(spectrum_symmetry_defect(&[Complex64::new(1.0, 0.0)]) > 1.0);
    }
}
