//! Fixtures shared by the benchmarks in `benches/`.

use ndtop::equilibria::{generate, GeneratorRecipe, RecipeBlock, StructureSource};
use ndtop::{InertiaSpec, SkewMatrix};

/// Body `J = diag(1, 1.5, 2, …)`.
pub fn body(n: usize) -> InertiaSpec {
    let ev: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * i as f64).collect();
    InertiaSpec::from_eigenvalues(&ev).expect("positive eigenvalues")
}

/// An equilibrium with one random 4-axis block (exotic for n ≥ 4), then
/// planes at decreasing frequency, then a fixed axis if `n` is odd.
pub fn equilibrium(n: usize) -> (InertiaSpec, SkewMatrix) {
    assert!(n >= 4);
    let mut blocks = vec![RecipeBlock {
        omega: 1.0,
        axes: vec![0, 1, 2, 3],
        structure_source: StructureSource::Random { seed: Some(1) },
    }];
    let mut a = 4;
    while a + 1 < n {
        blocks.push(RecipeBlock {
            omega: 0.8 / (blocks.len() as f64),
            axes: vec![a, a + 1],
            structure_source: StructureSource::Standard,
        });
        a += 2;
    }
    let recipe = GeneratorRecipe {
        blocks,
        fixed_axes: (a..n).collect(),
    };
    let b = body(n);
    let (m, _) = generate(&recipe, &b, 0).expect("valid recipe");
    (b, m)
}

/// A generic (non-equilibrium) momentum with unit-scale entries.
pub fn generic_momentum(n: usize) -> SkewMatrix {
    let mut m = SkewMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            m.set(i, j, ((7 * i + 3 * j) as f64 * 0.61).sin());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_equilibria() {
        for n in [4, 5, 6, 8] {
            let (b, m) = equilibrium(n);
            assert!(ndtop::equilibria::is_equilibrium(&m, &b, 1e-9).unwrap().equilibrium);
        }
    }
}
