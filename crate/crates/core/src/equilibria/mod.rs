//! Relative equilibria of the free rigid body.
//!
//! `M` is an equilibrium of `Ṁ = [M, Ω]` exactly when `Ω²` commutes with `J`,
//! since `[M, Ω] = [ΩJ + JΩ, Ω] = [J, Ω²]`. For `J` with distinct eigenvalues
//! every equilibrium has, in J's eigenframe, the block form
//! `Ω = blockdiag(ω₁A₁, …, ω_kA_k, 0)` with distinct `ωᵢ > 0` and each `Aᵢ` a
//! complex structure on an even number of principal axes. The equilibrium
//! is *regular* when every `Aᵢ` is a signed permutation (a rotation in
//! principal planes) and *exotic* otherwise.

mod classify;
mod generate;
mod structure;

pub use classify::{classify, is_equilibrium, ClassifyOptions, EquilibriumCheck};
pub use generate::{
    build_momentum, build_omega, canonicalize, generate, GeneratorRecipe, RecipeBlock, StructureSource,
};
pub use structure::{
    random_complex_structure, structure_distance, ComplexStructure, SIGNED_PERMUTATION_TOL, STRUCTURE_TOL,
};

use crate::body::BodyError;
use crate::linalg::LinalgError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default relative gap separating distinct frequencies.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("not an equilibrium: residual {residual:e}")]
    NotAnEquilibrium { residual: f64 },
    #[error("frequency group ω = {omega} spans an odd number of axes ({size}); tolerances are misconfigured")]
    OddBlock { omega: f64, size: usize },
    #[error("ambiguous frequency clustering: ω² values {a:e} and {b:e} differ by {gap:e} (relative), between tol and cluster_tol")]
    AmbiguousClustering { a: f64, b: f64, gap: f64 },
    #[error("normal form check failed ({check}): deviation {deviation:e}")]
    FormViolation { check: &'static str, deviation: f64 },
    #[error("not a complex structure: defect {defect:e}")]
    NotComplexStructure { defect: f64 },
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
}

/// One frequency group of an equilibrium: `Ω` restricted to `axes` is `omega·A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyBlock {
    pub omega: f64,
    /// Indices (0-based, ascending eigenvalue order) of J's principal axes.
    pub axes: Vec<usize>,
    #[serde(rename = "A")]
    pub structure: ComplexStructure,
}

/// Normal form of an equilibrium.
///
/// Canonical ordering: blocks by descending `omega`, axes ascending inside
/// each block, `fixed_axes` ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriumStructure {
    pub blocks: Vec<FrequencyBlock>,
    pub fixed_axes: Vec<usize>,
    pub regular: bool,
    pub residual: f64,
}

impl EquilibriumStructure {
    /// Structure with every axis fixed (`M = 0`).
    pub fn at_rest(n: usize) -> Self {
        Self {
            blocks: Vec::new(),
            fixed_axes: (0..n).collect(),
            regular: true,
            residual: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.axes.len()).sum::<usize>() + self.fixed_axes.len()
    }

    pub fn is_exotic(&self) -> bool {
        !self.regular
    }

    /// Compares axes and flags exactly, omegas to a relative tolerance and
    /// structures entrywise to `structure_tol`. Residuals are ignored.
    pub fn matches(&self, other: &Self, omega_rel: f64, structure_tol: f64) -> bool {
        self.regular == other.regular
            && self.fixed_axes == other.fixed_axes
            && self.blocks.len() == other.blocks.len()
            && self.blocks.iter().zip(&other.blocks).all(|(a, b)| {
                a.axes == b.axes
                    && (a.omega - b.omega).abs() <= omega_rel * a.omega.abs().max(b.omega.abs())
                    && crate::linalg::max_abs(a.structure.matrix().as_matrix() - b.structure.matrix().as_matrix())
                        <= structure_tol
            })
    }
}
