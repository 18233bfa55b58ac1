use super::classify::{classify, ClassifyOptions};
use super::structure::{is_signed_permutation, random_complex_structure, ComplexStructure, SIGNED_PERMUTATION_TOL};
use super::{EquilibriumError, EquilibriumStructure, FrequencyBlock, DEFAULT_CLUSTER_TOL};
use crate::body::{inertia_apply, InertiaSpec};
use crate::linalg::{Matrix, SkewMatrix};
use serde::{Deserialize, Serialize};

/// Where a block's complex structure comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureSource {
    /// `blockdiag(R, …, R)` on the block's axes in the listed order.
    Standard,
    /// [`random_complex_structure`]; without a seed, `base_seed + block index`.
    Random { seed: Option<u64> },
    /// Rows of an explicit complex structure, indexed in the listed axis order.
    Explicit(ComplexStructure),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecipeBlock {
    pub omega: f64,
    pub axes: Vec<usize>,
    pub structure_source: StructureSource,
}

/// A decomposition of the principal axes into even-sized rotating blocks
/// and fixed axes, with a frequency and a complex structure per block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRecipe {
    pub blocks: Vec<RecipeBlock>,
    #[serde(default)]
    pub fixed_axes: Vec<usize>,
}

impl GeneratorRecipe {
    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.axes.len()).sum::<usize>() + self.fixed_axes.len()
    }
}

fn check_partition(n: usize, blocks: &[(f64, &[usize])], fixed: &[usize]) -> Result<(), EquilibriumError> {
    let mut seen = vec![false; n];
    let mut mark = |a: usize| -> Result<(), EquilibriumError> {
        if a >= n {
            return Err(EquilibriumError::InvalidStructure(format!(
                "axis {a} out of range for n = {n}"
            )));
        }
        if std::mem::replace(&mut seen[a], true) {
            return Err(EquilibriumError::InvalidStructure(format!("axis {a} used twice")));
        }
        Ok(())
    };
    for (omega, axes) in blocks {
        if !(omega.is_finite() && *omega > 0.0) {
            return Err(EquilibriumError::InvalidStructure(format!(
                "omega must be positive, got {omega}"
            )));
        }
        if axes.is_empty() || axes.len() % 2 == 1 {
            return Err(EquilibriumError::InvalidStructure(format!(
                "block with omega {omega} has {} axes; blocks need an even positive count",
                axes.len()
            )));
        }
        for &a in *axes {
            mark(a)?;
        }
    }
    for &a in fixed {
        mark(a)?;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(EquilibriumError::InvalidStructure(format!(
            "axis {missing} not assigned"
        )));
    }
    let max_sq = blocks.iter().map(|(w, _)| w * w).fold(0.0, f64::max);
    for (i, (a, _)) in blocks.iter().enumerate() {
        for (b, _) in &blocks[i + 1..] {
            if (a * a - b * b).abs() <= DEFAULT_CLUSTER_TOL * max_sq {
                return Err(EquilibriumError::InvalidStructure(format!(
                    "frequencies {a} and {b} are not separated"
                )));
            }
        }
    }
    Ok(())
}

/// Resolves the recipe's structures and returns its canonical
/// [`EquilibriumStructure`] (residual 0), without building any matrix.
pub fn canonicalize(
    recipe: &GeneratorRecipe,
    n: usize,
    base_seed: u64,
) -> Result<EquilibriumStructure, EquilibriumError> {
    let parts: Vec<(f64, &[usize])> = recipe.blocks.iter().map(|b| (b.omega, b.axes.as_slice())).collect();
    check_partition(n, &parts, &recipe.fixed_axes)?;

    let mut blocks = Vec::with_capacity(recipe.blocks.len());
    for (index, b) in recipe.blocks.iter().enumerate() {
        let m = b.axes.len() / 2;
        let structure = match &b.structure_source {
            StructureSource::Standard => ComplexStructure::standard(m),
            StructureSource::Random { seed } => {
                random_complex_structure(m, seed.unwrap_or(base_seed.wrapping_add(index as u64)))?
            }
            StructureSource::Explicit(a) => {
                if a.dim() != b.axes.len() {
                    return Err(EquilibriumError::InvalidStructure(format!(
                        "explicit structure is {}x{} but the block has {} axes",
                        a.dim(),
                        a.dim(),
                        b.axes.len()
                    )));
                }
                a.clone()
            }
        };
        // sort axes, carrying the structure along
        let mut perm: Vec<usize> = (0..b.axes.len()).collect();
        perm.sort_by_key(|&p| b.axes[p]);
        let axes = perm.iter().map(|&p| b.axes[p]).collect();
        blocks.push(FrequencyBlock {
            omega: b.omega,
            axes,
            structure: structure.permuted(&perm),
        });
    }
    blocks.sort_by(|a, b| b.omega.total_cmp(&a.omega));
    let mut fixed_axes = recipe.fixed_axes.clone();
    fixed_axes.sort_unstable();
    let regular = blocks
        .iter()
        .all(|b| is_signed_permutation(b.structure.matrix().as_matrix(), SIGNED_PERMUTATION_TOL));
    Ok(EquilibriumStructure {
        blocks,
        fixed_axes,
        regular,
        residual: 0.0,
    })
}

/// Assembles `Ω = blockdiag(ωᵢAᵢ, 0)` in J's eigenframe and rotates it to the
/// ambient frame.
pub fn build_omega(structure: &EquilibriumStructure, body: &InertiaSpec) -> Result<SkewMatrix, EquilibriumError> {
    let n = body.n();
    let parts: Vec<(f64, &[usize])> = structure.blocks.iter().map(|b| (b.omega, b.axes.as_slice())).collect();
    check_partition(n, &parts, &structure.fixed_axes)?;
    let mut wt = Matrix::zeros(n, n);
    for b in &structure.blocks {
        if b.structure.dim() != b.axes.len() {
            return Err(EquilibriumError::InvalidStructure(format!(
                "structure is {}x{} but the block has {} axes",
                b.structure.dim(),
                b.structure.dim(),
                b.axes.len()
            )));
        }
        let a = b.structure.matrix();
        for (p, &i) in b.axes.iter().enumerate() {
            for (q, &k) in b.axes.iter().enumerate() {
                wt[(i, k)] = b.omega * a.get(p, q);
            }
        }
    }
    Ok(SkewMatrix::skew_part(&body.frame().from_frame(&wt)))
}

/// `M = 𝒥(build_omega(structure))`.
pub fn build_momentum(structure: &EquilibriumStructure, body: &InertiaSpec) -> Result<SkewMatrix, EquilibriumError> {
    Ok(inertia_apply(&build_omega(structure, body)?, body)?)
}

/// Realizes a recipe as an equilibrium momentum.
///
/// The returned structure is the classifier's reading of the returned `M`,
/// checked against the recipe's canonical form.
pub fn generate(
    recipe: &GeneratorRecipe,
    body: &InertiaSpec,
    base_seed: u64,
) -> Result<(SkewMatrix, EquilibriumStructure), EquilibriumError> {
    let canonical = canonicalize(recipe, body.n(), base_seed)?;
    let m = build_momentum(&canonical, body)?;
    let opts = ClassifyOptions {
        tol: 1e-10,
        ..ClassifyOptions::default()
    };
    let classified = classify(&m, body, &opts)?;
    if !classified.matches(&canonical, 1e-8, 1e-8) {
        return Err(EquilibriumError::InvalidStructure(
            "generated momentum does not reproduce the recipe's normal form".into(),
        ));
    }
    Ok((m, classified))
}
