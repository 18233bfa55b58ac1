//! Numerics for the free n-dimensional rigid body.
//!
//! The body is described by a symmetric positive-definite matrix `J` with
//! pairwise distinct eigenvalues. Its angular momentum `M` and angular
//! velocity `Ω` are skew-symmetric and related by `M = ΩJ + JΩ`; the motion
//! obeys the Euler–Arnold equations `Ṁ = [M, Ω]`.
//!
//! - [`linalg`]: small dense matrices, Jacobi eigen-solver, canonical planes
//!   of a skew operator.
//! - [`body`]: the inertia operator, the vector field, RK4 integration and
//!   conserved-quantity monitors.
//! - [`equilibria`]: equilibrium test, normal-form classifier (regular vs.
//!   exotic) and generators.
//! - [`stability`]: linearization, orbit-tangent equilibrium kernel and
//!   perturbation-growth probes.
//! - [`io`]: JSON schemas shared with the command-line tool.
//! - [`scenario`]: simulation scenario files.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod body;
pub mod equilibria;
pub mod io;
pub mod linalg;
pub mod scenario;
pub mod stability;

pub use body::{BodyError, BodyState, InertiaSpec, InvariantReport, Trajectory};
pub use equilibria::{ComplexStructure, EquilibriumError, EquilibriumStructure, FrequencyBlock, GeneratorRecipe};
pub use linalg::{EigenFrame, LinalgError, Matrix, PlaneDecomposition, SkewMatrix, SymMatrix, Vector};
pub use stability::{LinearizationReport, OrbitKernelReport, ProbeReport, ProbeSettings, StabilityError};
