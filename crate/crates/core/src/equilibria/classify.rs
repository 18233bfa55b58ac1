use super::structure::{is_signed_permutation, structure_defect, SIGNED_PERMUTATION_TOL, STRUCTURE_TOL};
use super::{
    ComplexStructure, EquilibriumError, EquilibriumStructure, FrequencyBlock, DEFAULT_CLUSTER_TOL, DEFAULT_TOL,
};
use crate::body::{inertia_invert, InertiaSpec};
use crate::linalg::{commutator, frobenius_norm, Matrix, SkewMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub tol: f64,
    pub cluster_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumCheck {
    pub equilibrium: bool,
    /// `‖[J, Ω²]‖ / (‖J‖·‖Ω‖²)`.
    pub residual: f64,
    /// `‖[M, Ω]‖ / (‖J‖·‖Ω‖²)`; equal to `residual` up to rounding.
    pub bracket_residual: f64,
}

/// Equilibrium test: `Ω²` commutes with `J`.
pub fn is_equilibrium(m: &SkewMatrix, body: &InertiaSpec, tol: f64) -> Result<EquilibriumCheck, EquilibriumError> {
    if !(tol > 0.0) {
        return Err(EquilibriumError::InvalidStructure(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let omega = inertia_invert(m, body)?;
    let w = omega.as_matrix();
    let scale = body.j_norm() * omega.norm().powi(2);
    if scale == 0.0 {
        return Ok(EquilibriumCheck {
            equilibrium: true,
            residual: 0.0,
            bracket_residual: 0.0,
        });
    }
    let residual = frobenius_norm(commutator(body.j(), w * w)?) / scale;
    let bracket_residual = frobenius_norm(commutator(m, &omega)?) / scale;
    // identical quantities; rounding differences stay at machine level
    debug_assert!(
        (residual - bracket_residual).abs() <= 1e-10,
        "{residual} vs {bracket_residual}"
    );
    Ok(EquilibriumCheck {
        equilibrium: residual <= tol,
        residual,
        bracket_residual,
    })
}

/// Normal form of an equilibrium in J's eigenframe.
///
/// Steps: `Ω²` diagonal; its diagonal `−ω²` grouped into distinct
/// frequencies and a zero group; `Ω` block-diagonal on those groups; each
/// block divided by its `ω` is a complex structure; the zero block vanishes.
/// The result is regular iff every structure is a signed permutation.
pub fn classify(
    m: &SkewMatrix,
    body: &InertiaSpec,
    opts: &ClassifyOptions,
) -> Result<EquilibriumStructure, EquilibriumError> {
    let ClassifyOptions { tol, cluster_tol } = *opts;
    if !(cluster_tol >= tol) {
        return Err(EquilibriumError::InvalidStructure(format!(
            "cluster_tol ({cluster_tol}) must be at least tol ({tol})"
        )));
    }
    let check = is_equilibrium(m, body, tol)?;
    if !check.equilibrium {
        return Err(EquilibriumError::NotAnEquilibrium {
            residual: check.residual,
        });
    }
    let n = body.n();
    let omega = inertia_invert(m, body)?;
    let sc = omega.norm().powi(2);
    if sc == 0.0 {
        return Ok(EquilibriumStructure::at_rest(n));
    }
    let frame = body.frame();
    let lambda = &frame.eigenvalues;
    let wt = frame.to_frame(omega.as_matrix());
    let sq = &wt * &wt;

    // (a) Ω² diagonal, entrywise form of the equilibrium criterion
    let j_norm = body.j_norm();
    let mut off = 0.0f64;
    for i in 0..n {
        for k in (i + 1)..n {
            let v = 0.5 * (sq[(i, k)] + sq[(k, i)]).abs() * (lambda[i] - lambda[k]).abs() / (j_norm * sc);
            off = off.max(v);
        }
    }
    if off > tol {
        return Err(EquilibriumError::FormViolation {
            check: "squared velocity is not diagonal",
            deviation: off,
        });
    }

    // (b) group the diagonal −ω² by value
    let groups = cluster(&sq, sc, tol, cluster_tol)?;

    // (c) off-block entries vanish
    let mut group_of = vec![usize::MAX; n];
    for (g, grp) in groups.iter().enumerate() {
        for &a in &grp.axes {
            group_of[a] = g;
        }
    }
    let w_norm = sc.sqrt();
    let mut off_block = 0.0f64;
    for i in 0..n {
        for k in (i + 1)..n {
            if group_of[i] != group_of[k] {
                off_block = off_block.max(wt[(i, k)].abs() / w_norm);
            }
        }
    }
    if off_block > tol {
        return Err(EquilibriumError::FormViolation {
            check: "velocity is not block-diagonal on frequency groups",
            deviation: off_block,
        });
    }

    let mut blocks = Vec::new();
    let mut fixed_axes = Vec::new();
    for grp in &groups {
        let Some(omega_sq) = grp.omega_sq else {
            // (e) zero block: Ω vanishes on the fixed axes
            let mut dev = 0.0f64;
            for &a in &grp.axes {
                for &b in &grp.axes {
                    dev = dev.max(wt[(a, b)].abs() / w_norm);
                }
            }
            if dev > tol {
                return Err(EquilibriumError::FormViolation {
                    check: "velocity does not vanish on the fixed axes",
                    deviation: dev,
                });
            }
            fixed_axes.extend(grp.axes.iter().copied());
            continue;
        };
        let w = omega_sq.sqrt();
        if grp.axes.len() % 2 == 1 {
            return Err(EquilibriumError::OddBlock {
                omega: w,
                size: grp.axes.len(),
            });
        }
        // (d) Aᵢ = Bᵢ / ωᵢ is a complex structure
        let d = grp.axes.len();
        let a = SkewMatrix::skew_part(&Matrix::from_fn(d, d, |p, q| wt[(grp.axes[p], grp.axes[q])] / w));
        let slack = (tol * sc / omega_sq).max(STRUCTURE_TOL);
        let defect = structure_defect(a.as_matrix());
        if defect > slack {
            return Err(EquilibriumError::NotComplexStructure { defect });
        }
        blocks.push(FrequencyBlock {
            omega: w,
            axes: grp.axes.clone(),
            structure: ComplexStructure::with_tolerance(a, slack)?,
        });
    }
    fixed_axes.sort_unstable();

    // (f) regular iff each block is a signed permutation
    let regular = blocks
        .iter()
        .all(|b| is_signed_permutation(b.structure.matrix().as_matrix(), SIGNED_PERMUTATION_TOL));

    Ok(EquilibriumStructure {
        blocks,
        fixed_axes,
        regular,
        residual: check.residual,
    })
}

struct Group {
    /// `None` for the zero group.
    omega_sq: Option<f64>,
    axes: Vec<usize>,
}

/// Groups the diagonal of `Ω̃²` (values `−ωᵢ²`) into frequency groups with
/// descending `ω` plus an optional trailing zero group. Consecutive sorted
/// values join a group when their gap is `≤ tol·sc`, start a new group when
/// it exceeds `cluster_tol·sc`, and are ambiguous in between.
fn cluster(sq: &Matrix, sc: f64, tol: f64, cluster_tol: f64) -> Result<Vec<Group>, EquilibriumError> {
    let n = sq.nrows();
    let mut vals: Vec<(f64, usize)> = (0..n).map(|i| ((-sq[(i, i)]).max(0.0), i)).collect();
    vals.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut groups: Vec<(Vec<f64>, Vec<usize>)> = Vec::new();
    let mut zero = Vec::new();
    for &(v, axis) in &vals {
        let rel = v / sc;
        if rel <= tol {
            zero.push(axis);
            continue;
        }
        if rel <= cluster_tol {
            return Err(EquilibriumError::AmbiguousClustering { a: v, b: 0.0, gap: rel });
        }
        match groups.last_mut() {
            Some((members, axes)) => {
                let prev = *members.last().unwrap();
                let gap = (prev - v) / sc;
                if gap <= tol {
                    members.push(v);
                    axes.push(axis);
                } else if gap > cluster_tol {
                    groups.push((vec![v], vec![axis]));
                } else {
                    return Err(EquilibriumError::AmbiguousClustering { a: prev, b: v, gap });
                }
            }
            None => groups.push((vec![v], vec![axis])),
        }
    }

    let mut out: Vec<Group> = groups
        .into_iter()
        .map(|(members, mut axes)| {
            axes.sort_unstable();
            Group {
                omega_sq: Some(members.iter().sum::<f64>() / members.len() as f64),
                axes,
            }
        })
        .collect();
    if !zero.is_empty() {
        zero.sort_unstable();
        out.push(Group {
            omega_sq: None,
            axes: zero,
        });
    }
    Ok(out)
}
