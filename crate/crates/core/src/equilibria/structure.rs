use crate::linalg::{frobenius_norm, qr_positive, Matrix, SkewMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::EquilibriumError;

/// Tolerance used when validating complex structures supplied from outside.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Entries within this distance of 0 or ±1 count as such in the
/// signed-permutation test.
pub const SIGNED_PERMUTATION_TOL: f64 = 1e-8;

/// A complex structure compatible with the Euclidean metric: `Aᵀ = −A`,
/// `A² = −I`, equivalently `A ∈ so(2m) ∩ SO(2m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    a: SkewMatrix,
}

impl ComplexStructure {
    /// Validates `a` at [`STRUCTURE_TOL`].
    pub fn new(a: SkewMatrix) -> Result<Self, EquilibriumError> {
        Self::with_tolerance(a, STRUCTURE_TOL)
    }

    pub fn with_tolerance(a: SkewMatrix, tol: f64) -> Result<Self, EquilibriumError> {
        let dim = a.n();
        if dim == 0 || dim % 2 == 1 {
            return Err(EquilibriumError::InvalidStructure(format!(
                "complex structure needs an even positive dimension, got {dim}"
            )));
        }
        let defect = structure_defect(a.as_matrix());
        if defect > tol {
            return Err(EquilibriumError::NotComplexStructure { defect });
        }
        Ok(Self { a })
    }

    /// Standard structure `blockdiag(R, …, R)`, `R = [[0, 1], [−1, 0]]`.
    pub fn standard(m: usize) -> Self {
        let mut a = SkewMatrix::zeros(2 * m);
        for k in 0..m {
            a.set(2 * k, 2 * k + 1, 1.0);
        }
        Self { a }
    }

    pub fn dim(&self) -> usize {
        self.a.n()
    }

    pub fn matrix(&self) -> &SkewMatrix {
        &self.a
    }

    /// Conjugates by the permutation `perm`: entry `(p, q)` of the result is
    /// entry `(perm[p], perm[q])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let a = SkewMatrix::from_upper_fn(self.dim(), |p, q| self.a.get(perm[p], perm[q]));
        Self { a }
    }

    /// True when every row has exactly one entry near ±1 and the rest near 0.
    pub fn is_signed_permutation(&self) -> bool {
        is_signed_permutation(self.a.as_matrix(), SIGNED_PERMUTATION_TOL)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        let m = self.a.as_matrix();
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect()
    }
}

/// `max(‖A² + I‖_max, ‖AᵀA − I‖_max)`.
pub(crate) fn structure_defect(a: &Matrix) -> f64 {
    let n = a.nrows();
    let id = Matrix::identity(n, n);
    let sq = a * a + &id;
    let orth = a.transpose() * a - id;
    crate::linalg::max_abs(sq).max(crate::linalg::max_abs(orth))
}

pub(crate) fn is_signed_permutation(a: &Matrix, tol: f64) -> bool {
    (0..a.nrows()).all(|i| {
        let mut units = 0;
        for j in 0..a.ncols() {
            let v = a[(i, j)].abs();
            if (v - 1.0).abs() <= tol {
                units += 1;
            } else if v > tol {
                return false;
            }
        }
        units == 1
    })
}

impl Serialize for ComplexStructure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexStructure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        let a = crate::io::skew_from_rows(&rows).map_err(serde::de::Error::custom)?;
        ComplexStructure::new(a).map_err(serde::de::Error::custom)
    }
}

/// Random complex structure `A = Q·K·Qᵀ` on R^{2m}, with `K` the standard
/// structure and `Q` the orthogonal QR factor (positive-diagonal `R`) of a
/// 2m×2m standard Gaussian matrix.
///
/// The Gaussian entries are drawn from `ChaCha8Rng::seed_from_u64(seed)` in
/// row-major order, so the output depends only on `(m, seed)`.
pub fn random_complex_structure(m: usize, seed: u64) -> Result<ComplexStructure, EquilibriumError> {
    if m < 1 {
        return Err(EquilibriumError::InvalidStructure(
            "random complex structure needs m >= 1".into(),
        ));
    }
    let dim = 2 * m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = StandardNormal.sample(&mut rng);
        }
    }
    let q = qr_positive(&g)?;
    let k = ComplexStructure::standard(m);
    let a = k.a.conjugate(&q);
    debug_assert!(structure_defect(a.as_matrix()) < 1e-12);
    Ok(ComplexStructure { a })
}

/// Distance between two structures of equal dimension (Frobenius).
pub fn structure_distance(a: &ComplexStructure, b: &ComplexStructure) -> f64 {
    frobenius_norm(a.a.as_matrix() - b.a.as_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_structure_is_valid() {
        let k = ComplexStructure::standard(3);
        assert_eq!(structure_defect(k.matrix().as_matrix()), 0.0);
        assert!(k.is_signed_permutation());
    }

    #[test]
    fn m_equal_one_gives_plus_or_minus_standard() {
        let k = ComplexStructure::standard(1);
        for seed in 0..32 {
            let a = random_complex_structure(1, seed).unwrap();
            let d_plus = structure_distance(&a, &k);
            let d_minus = frobenius_norm(a.matrix().as_matrix() + k.matrix().as_matrix());
            assert!(d_plus.min(d_minus) < 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn random_structure_squares_to_minus_identity() {
        let a = random_complex_structure(2, 42).unwrap();
        let sq = a.matrix().as_matrix() * a.matrix().as_matrix() + Matrix::identity(4, 4);
        assert!(crate::linalg::max_abs(sq) < 1e-12);
        assert!(!a.is_signed_permutation());
    }

    #[test]
    fn seeds_are_reproducible_and_distinct() {
        let a = random_complex_structure(3, 7).unwrap();
        let b = random_complex_structure(3, 7).unwrap();
        let c = random_complex_structure(3, 8).unwrap();
        assert_eq!(a, b);
        assert!(structure_distance(&a, &c) > 1e-3);
    }

    #[test]
    fn rejects_odd_and_invalid() {
        assert!(random_complex_structure(0, 1).is_err());
        assert!(ComplexStructure::new(SkewMatrix::zeros(3)).is_err());
        let mut a = SkewMatrix::zeros(2);
        a.set(0, 1, 0.5);
        assert!(matches!(
            ComplexStructure::new(a),
            Err(EquilibriumError::NotComplexStructure { .. })
        ));
    }

    #[test]
    fn permutation_preserves_validity() {
        let a = random_complex_structure(2, 3).unwrap();
        let p = a.permuted(&[2, 0, 3, 1]);
        assert!(structure_defect(p.matrix().as_matrix()) < 1e-12);
        assert_eq!(p.matrix().get(0, 1), a.matrix().get(2, 0));
    }
}
