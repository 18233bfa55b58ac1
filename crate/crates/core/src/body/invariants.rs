use super::{inertia_invert, BodyError, InertiaSpec};
use crate::linalg::{Matrix, SkewMatrix};
use serde::{Deserialize, Serialize};

/// Kinetic energy `−¼·tr(M·Ω)`.
///
/// For n = 3 this is `½ Σ Iᵢωᵢ²` under the usual hat map, with principal
/// moments `I₁ = λ₂ + λ₃` and cyclic.
pub fn energy(m: &SkewMatrix, body: &InertiaSpec) -> Result<f64, BodyError> {
    let omega = inertia_invert(m, body)?;
    // tr(MΩ) = −Σᵢⱼ MᵢⱼΩᵢⱼ for skew Ω
    let dot: f64 = m
        .as_matrix()
        .iter()
        .zip(omega.as_matrix().iter())
        .map(|(a, b)| a * b)
        .sum();
    Ok(0.25 * dot)
}

/// `tr(M^{2k})` for `k = 1..=⌊n/2⌋`.
pub fn casimirs(m: &SkewMatrix) -> Vec<f64> {
    let n = m.n();
    let sq = m.as_matrix() * m.as_matrix();
    let mut power = sq.clone();
    let mut out = Vec::with_capacity(n / 2);
    for k in 1..=n / 2 {
        if k > 1 {
            power = &power * &sq;
        }
        out.push(power.trace());
    }
    out
}

/// `(k, j)` labels of [`manakov_integrals`], in output order.
pub fn manakov_labels(max_power: usize) -> Vec<(usize, usize)> {
    (2..=max_power).flat_map(|k| (0..=k).map(move |j| (k, j))).collect()
}

/// Coefficients of `λʲ` in `tr((M + λJ²)ᵏ)` for `k = 2..=max_power`, `j = 0..=k`.
///
/// Powers of the matrix polynomial are formed coefficient-wise, so each
/// coefficient is computed directly rather than by interpolation in λ.
/// Coefficients with `k − j` odd vanish identically; `j = k` gives `tr(J^{2k})`.
pub fn manakov_integrals(m: &SkewMatrix, body: &InertiaSpec, max_power: usize) -> Result<Vec<f64>, BodyError> {
    if max_power < 2 {
        return Err(BodyError::BadPower(max_power));
    }
    if m.n() != body.n() {
        return Err(BodyError::DimensionMismatch {
            body: body.n(),
            matrix: m.n(),
        });
    }
    let j = body.j().as_matrix();
    let j2 = j * j;
    let base = [m.as_matrix().clone(), j2];

    // power[d] is the coefficient of λ^d in (M + λJ²)^k
    let mut power: Vec<Matrix> = base.to_vec();
    let mut out = Vec::new();
    for k in 2..=max_power {
        let mut next: Vec<Matrix> = vec![Matrix::zeros(m.n(), m.n()); k + 1];
        for (d, c) in power.iter().enumerate() {
            next[d] += c * &base[0];
            next[d + 1] += c * &base[1];
        }
        power = next;
        out.extend(power.iter().map(|c| c.trace()));
    }
    Ok(out)
}

/// Conserved quantities evaluated at one state.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub energy: f64,
    pub casimirs: Vec<f64>,
    pub manakov: Vec<f64>,
}

impl InvariantReport {
    pub fn compute(m: &SkewMatrix, body: &InertiaSpec, max_power: usize) -> Result<Self, BodyError> {
        Ok(Self {
            energy: energy(m, body)?,
            casimirs: casimirs(m),
            manakov: manakov_integrals(m, body, max_power)?,
        })
    }

    /// All values in a fixed order: energy, casimirs, manakov.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.energy)
            .chain(self.casimirs.iter().copied())
            .chain(self.manakov.iter().copied())
    }
}
