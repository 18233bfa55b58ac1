#![allow(dead_code)]

use ndtop::body::InertiaSpec;
use ndtop::equilibria::{GeneratorRecipe, RecipeBlock, StructureSource};
use ndtop::linalg::{qr_positive, Matrix, SkewMatrix, SymMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_skew(n: usize, rng: &mut ChaCha8Rng) -> SkewMatrix {
    SkewMatrix::from_upper_fn(n, |_, _| rng.sample(StandardNormal))
}

pub fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let g = Matrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    qr_positive(&g).unwrap()
}

/// Eigenvalues in [0.5, 5] with relative gaps of at least 5%.
pub fn random_eigenvalues(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut ev: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..5.0)).collect();
        ev.sort_by(f64::total_cmp);
        if ev.windows(2).all(|w| w[1] - w[0] > 0.05 * w[1]) {
            return ev;
        }
    }
}

/// Body with random spectrum, diagonal in a random orthonormal frame.
pub fn random_body(n: usize, rng: &mut ChaCha8Rng) -> InertiaSpec {
    let ev = random_eigenvalues(n, rng);
    let q = random_orthogonal(n, rng);
    let d = Matrix::from_diagonal(&ndtop::Vector::from_vec(ev));
    let j = SymMatrix::symmetric_part(&(&q * d * q.transpose()));
    InertiaSpec::new(j).unwrap()
}

pub fn diagonal_body(ev: &[f64]) -> InertiaSpec {
    InertiaSpec::from_eigenvalues(ev).unwrap()
}

pub fn block(omega: f64, axes: Vec<usize>, source: StructureSource) -> RecipeBlock {
    RecipeBlock {
        omega,
        axes,
        structure_source: source,
    }
}

/// Distinct frequencies in [0.5, 2] whose squares differ by at least 10%.
fn frequencies(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut w: Vec<f64> = (0..k).map(|_| rng.random_range(0.5..2.0)).collect();
        w.sort_by(f64::total_cmp);
        if w.windows(2).all(|p| p[1] * p[1] - p[0] * p[0] > 0.1 * p[1] * p[1]) {
            return w;
        }
    }
}

/// Random recipe on a random axis partition, n ≤ 8. Size-2 blocks are
/// standard; larger blocks are random (exotic) with probability 1/2.
pub fn random_recipe(n: usize, rng: &mut ChaCha8Rng) -> GeneratorRecipe {
    let mut axes: Vec<usize> = (0..n).collect();
    axes.shuffle(rng);
    let mut sizes = Vec::new();
    let mut left = n;
    while left >= 2 {
        let max_m = left / 2;
        let m = rng.random_range(1..=max_m);
        if rng.random_bool(0.15) {
            break;
        }
        sizes.push(2 * m);
        left -= 2 * m;
    }
    let omegas = frequencies(sizes.len(), rng);
    let mut at = 0;
    let mut blocks = Vec::new();
    for (size, omega) in sizes.into_iter().zip(omegas) {
        let ax = axes[at..at + size].to_vec();
        at += size;
        let source = if size >= 4 && rng.random_bool(0.5) {
            StructureSource::Random {
                seed: Some(rng.random()),
            }
        } else {
            StructureSource::Standard
        };
        blocks.push(block(omega, ax, source));
    }
    GeneratorRecipe {
        blocks,
        fixed_axes: axes[at..].to_vec(),
    }
}

/// `log₂(e(h)/e(h/2))`.
pub fn halving_slope(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}
