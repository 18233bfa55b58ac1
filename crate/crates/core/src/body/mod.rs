//! The Euler–Arnold system `Ṁ = [M, Ω]`, `M = ΩJ + JΩ` on so(n).

mod integrate;
mod invariants;

pub use integrate::{integrate, step_rk4, DriftSummary, GuardPolicy, IntegratorSettings, Sample, Trajectory};
pub use invariants::{casimirs, energy, manakov_integrals, manakov_labels, InvariantReport};

use crate::linalg::{commutator, eigen_symmetric, LinalgError, Matrix, SkewMatrix, SymMatrix};
use thiserror::Error;

/// Minimum relative gap between eigenvalues of `J` accepted by default.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BodyError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("inertia matrix must be positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
    #[error("eigenvalues {index} and {next} of J are closer than the gap tolerance ({gap:e})", next = .index + 1)]
    DegenerateSpectrum { index: usize, gap: f64 },
    #[error("dimension mismatch: body is {body}, matrix is {matrix}")]
    DimensionMismatch { body: usize, matrix: usize },
    #[error("time step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("state became non-finite at t = {t}")]
    NonFinite { t: f64 },
    #[error("step guard: dt·‖Ω‖ = {product:.3} exceeds 0.5")]
    StepGuard { product: f64 },
    #[error("max_power must be at least 2, got {0}")]
    BadPower(usize),
    #[error("attitude is not orthonormal (defect {0:e})")]
    BadAttitude(f64),
    #[error("invalid integrator setting: {0}")]
    Settings(String),
}

/// A rigid body: the symmetric positive-definite matrix `J` with pairwise
/// distinct eigenvalues, together with its eigenframe.
#[derive(Debug, Clone, PartialEq)]
pub struct InertiaSpec {
    j: SymMatrix,
    frame: crate::linalg::EigenFrame,
    // eigenframe is exactly the identity
    aligned: bool,
}

impl InertiaSpec {
    pub fn new(j: SymMatrix) -> Result<Self, BodyError> {
        Self::with_gap_tol(j, DEFAULT_GAP_TOL)
    }

    pub fn with_gap_tol(j: SymMatrix, gap_tol: f64) -> Result<Self, BodyError> {
        let frame = eigen_symmetric(&j)?;
        let lambda = &frame.eigenvalues;
        let min = lambda.first().copied().unwrap_or(1.0);
        if !(min > 0.0) {
            return Err(BodyError::NotPositiveDefinite(min));
        }
        let max = lambda.last().copied().unwrap_or(1.0);
        for (index, w) in lambda.windows(2).enumerate() {
            let gap = w[1] - w[0];
            if gap < gap_tol * max {
                return Err(BodyError::DegenerateSpectrum { index, gap });
            }
        }
        let n = j.n();
        let aligned = frame.basis == Matrix::identity(n, n);
        Ok(Self { j, frame, aligned })
    }

    /// The same body expressed in its own eigenframe, `diag(λ₁, …, λₙ)`.
    pub fn principal(&self) -> Self {
        let n = self.n();
        Self {
            j: SymMatrix::from_diagonal(&self.frame.eigenvalues),
            frame: crate::linalg::EigenFrame {
                eigenvalues: self.frame.eigenvalues.clone(),
                basis: Matrix::identity(n, n),
            },
            aligned: true,
        }
    }

    /// Diagonal body `J = diag(eigenvalues)`.
    pub fn from_eigenvalues(eigenvalues: &[f64]) -> Result<Self, BodyError> {
        Self::new(SymMatrix::from_diagonal(eigenvalues))
    }

    pub fn n(&self) -> usize {
        self.j.n()
    }

    pub fn j(&self) -> &SymMatrix {
        &self.j
    }

    pub fn frame(&self) -> &crate::linalg::EigenFrame {
        &self.frame
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.frame.eigenvalues
    }

    pub fn j_norm(&self) -> f64 {
        crate::linalg::frobenius_norm(self.j.as_matrix())
    }

    fn check_dim(&self, m: &SkewMatrix) -> Result<(), BodyError> {
        if m.n() != self.n() {
            return Err(BodyError::DimensionMismatch {
                body: self.n(),
                matrix: m.n(),
            });
        }
        Ok(())
    }
}

/// `𝒥(Ω) = ΩJ + JΩ`.
pub fn inertia_apply(omega: &SkewMatrix, body: &InertiaSpec) -> Result<SkewMatrix, BodyError> {
    body.check_dim(omega)?;
    let j = body.j.as_matrix();
    let w = omega.as_matrix();
    Ok(SkewMatrix::skew_part(&(w * j + j * w)))
}

/// `𝒥⁻¹(M)`, diagonal in J's eigenframe: `Ω̃ᵢⱼ = M̃ᵢⱼ / (λᵢ + λⱼ)`.
pub fn inertia_invert(m: &SkewMatrix, body: &InertiaSpec) -> Result<SkewMatrix, BodyError> {
    body.check_dim(m)?;
    let frame = &body.frame;
    let lambda = &frame.eigenvalues;
    let n = body.n();
    let divide = |mt: &Matrix| {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else {
                mt[(i, j)] / (lambda[i] + lambda[j])
            }
        })
    };
    if body.aligned {
        return Ok(SkewMatrix::skew_part(&divide(m.as_matrix())));
    }
    let wt = divide(&frame.to_frame(m.as_matrix()));
    Ok(SkewMatrix::skew_part(&frame.from_frame(&wt)))
}

/// `Ṁ = [M, Ω]` with `Ω = 𝒥⁻¹(M)`.
pub fn vector_field(m: &SkewMatrix, body: &InertiaSpec) -> Result<SkewMatrix, BodyError> {
    let omega = inertia_invert(m, body)?;
    Ok(SkewMatrix::skew_part(&commutator(m, &omega)?))
}

/// The same field written as `[J, Ω²]`.
pub fn vector_field_via_square(m: &SkewMatrix, body: &InertiaSpec) -> Result<SkewMatrix, BodyError> {
    let omega = inertia_invert(m, body)?;
    let w = omega.as_matrix();
    Ok(SkewMatrix::skew_part(&commutator(body.j(), w * w)?))
}

/// State of the body: angular momentum and, optionally, attitude `X ∈ SO(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyState {
    pub m: SkewMatrix,
    pub attitude: Option<Matrix>,
}

impl BodyState {
    pub fn new(m: SkewMatrix) -> Self {
        Self { m, attitude: None }
    }

    pub fn with_attitude(m: SkewMatrix, x: Matrix) -> Result<Self, BodyError> {
        let n = m.n();
        if x.nrows() != n || x.ncols() != n {
            return Err(BodyError::DimensionMismatch {
                body: n,
                matrix: x.nrows(),
            });
        }
        let defect = crate::linalg::frobenius_norm(x.transpose() * &x - Matrix::identity(n, n));
        if defect > 1e-9 {
            return Err(BodyError::BadAttitude(defect));
        }
        Ok(Self { m, attitude: Some(x) })
    }
}
