//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use common::*;
use ndtop::body::{
    inertia_apply, inertia_invert, integrate, manakov_labels, vector_field, vector_field_via_square, BodyState,
    IntegratorSettings,
};
use ndtop::equilibria::{
    build_momentum, canonicalize, classify, generate, is_equilibrium, ClassifyOptions, ComplexStructure,
    GeneratorRecipe, StructureSource,
};
use ndtop::io::{from_json_str, to_json_string, MatrixDoc};
use ndtop::linalg::{canonical_planes, commutator, SkewMatrix};
use ndtop::stability::{
    excess_kernel_directions, instability_probe, linearize, orbit_kernel, random_unit_skew, residual_decay_slope,
    ProbeSettings, DEFAULT_RANK_TOL,
};
use ndtop::{EquilibriumStructure, InertiaSpec};
use rand::seq::SliceRandom;
use rand::Rng;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    check(elapsed.as_secs_f64() < limit_s, || {
        format!("runtime {:.2} s exceeds {limit_s} s", elapsed.as_secs_f64())
    })
}

fn criterion_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..1000u64 {
        let n = 3 + (i % 6) as usize;
        let mut r = rng(1_000 + i);
        let body = random_body(n, &mut r);
        let m = random_skew(n, &mut r);
        let omega = inertia_invert(&m, &body).map_err(|e| e.to_string())?;
        let a = commutator(&m, &omega).map_err(|e| e.to_string())?;
        let w = omega.as_matrix();
        let b = commutator(body.j(), w * w).map_err(|e| e.to_string())?;
        let scale = body.j_norm() * omega.norm().powi(2);
        let dev = (a - b).norm() / scale;
        worst = worst.max(dev);
        check(dev <= 1e-12, || {
            format!("case {i} (n = {n}): relative deviation {dev:e}")
        })?;
        // the library's two field forms agree as well
        let f1 = vector_field(&m, &body).map_err(|e| e.to_string())?;
        let f2 = vector_field_via_square(&m, &body).map_err(|e| e.to_string())?;
        let dev = (f1.as_matrix() - f2.as_matrix()).norm() / scale;
        check(dev <= 1e-12, || format!("case {i}: library forms differ by {dev:e}"))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, 10.0)?;
    Ok(format!(
        "1000 cases, n = 3..8, worst {worst:.2e}, {:.2} s",
        elapsed.as_secs_f64()
    ))
}

struct Case {
    seed: u64,
    body: InertiaSpec,
    recipe: GeneratorRecipe,
}

fn recipe_suite() -> Vec<Case> {
    (0..500u64)
        .map(|i| {
            let seed = 50_000 + i;
            let n = 3 + (i % 6) as usize;
            let mut r = rng(seed);
            let body = random_body(n, &mut r);
            let recipe = random_recipe(n, &mut r);
            Case { seed, body, recipe }
        })
        .collect()
}

fn criterion_soundness(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    let (mut exotic, mut worst_res, mut worst_dev) = (0, 0.0f64, 0.0f64);
    let settings = IntegratorSettings::new(1e-3, 10.0).record_every(10_000);
    for c in cases {
        let (m, s) = generate(&c.recipe, &c.body, c.seed).map_err(|e| format!("seed {}: {e}", c.seed))?;
        exotic += s.is_exotic() as usize;
        let chk = is_equilibrium(&m, &c.body, 1e-10).map_err(|e| e.to_string())?;
        worst_res = worst_res.max(chk.residual);
        check(chk.equilibrium && chk.residual <= 1e-10, || {
            format!("seed {}: residual {:e}", c.seed, chk.residual)
        })?;
        let traj = integrate(&c.body, BodyState::new(m), &settings).map_err(|e| e.to_string())?;
        let dev = traj.drift.state_deviation;
        worst_dev = worst_dev.max(dev);
        check(dev <= 1e-8, || {
            format!("seed {}: ‖M(t) − M(0)‖/‖M(0)‖ = {dev:e}", c.seed)
        })?;
    }
    check(exotic > 0 && exotic < cases.len(), || {
        format!("suite is not mixed ({exotic} exotic)")
    })?;
    let elapsed = start.elapsed();
    within(elapsed, 60.0)?;
    Ok(format!(
        "{} recipes ({exotic} exotic), worst residual {worst_res:.2e}, worst deviation {worst_dev:.2e}, {:.1} s",
        cases.len(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_round_trip(cases: &[Case]) -> Outcome {
    for c in cases {
        let canonical = canonicalize(&c.recipe, c.body.n(), c.seed).map_err(|e| e.to_string())?;
        let m = build_momentum(&canonical, &c.body).map_err(|e| e.to_string())?;
        let got = classify(&m, &c.body, &ClassifyOptions::default()).map_err(|e| format!("seed {}: {e}", c.seed))?;
        check(got.matches(&canonical, 1e-8, 1e-8), || {
            format!("seed {}: classified {got:?}, expected {canonical:?}", c.seed)
        })?;
    }
    Ok(format!("{} recipes reproduced", cases.len()))
}

fn criterion_discrimination() -> Outcome {
    let mut wrong = Vec::new();
    let (mut regular_cases, mut exotic_cases) = (0, 0);
    for i in 0..200u64 {
        let mut r = rng(90_000 + i);
        let n = r.random_range(4..=8usize);
        let body = random_body(n, &mut r);
        let mut axes: Vec<usize> = (0..n).collect();
        axes.shuffle(&mut r);
        let m = r.random_range(2..=n / 2);
        let size = 2 * m;
        let expect_regular = i % 2 == 0;
        let source = if expect_regular {
            let mut perm: Vec<usize> = (0..size).collect();
            perm.shuffle(&mut r);
            StructureSource::Explicit(ComplexStructure::standard(m).permuted(&perm))
        } else {
            StructureSource::Random { seed: Some(r.random()) }
        };
        let mut blocks = vec![block(1.0, axes[..size].to_vec(), source)];
        // a second, explicit 2×2 block when room allows
        if n - size >= 2 && r.random_bool(0.5) {
            blocks.push(block(1.7, axes[size..size + 2].to_vec(), StructureSource::Standard));
        }
        let used: usize = blocks.iter().map(|b| b.axes.len()).sum();
        let recipe = GeneratorRecipe {
            blocks,
            fixed_axes: axes[used..].to_vec(),
        };
        let canonical = canonicalize(&recipe, n, 0).map_err(|e| e.to_string())?;
        let mm = build_momentum(&canonical, &body).map_err(|e| e.to_string())?;
        let got = classify(&mm, &body, &ClassifyOptions::default()).map_err(|e| format!("case {i}: {e}"))?;
        if expect_regular {
            regular_cases += 1;
        } else {
            exotic_cases += 1;
        }
        if got.regular != expect_regular {
            wrong.push(i);
        }
    }
    check(wrong.is_empty(), || format!("misclassified cases {wrong:?}"))?;
    Ok(format!(
        "{regular_cases} regular + {exotic_cases} exotic, 0 misclassified"
    ))
}

/// Indices into `InvariantReport::values()` that are neither identically
/// zero nor constant.
fn live_invariants(n: usize, max_power: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..1 + n / 2).collect();
    let offset = 1 + n / 2;
    for (p, (k, j)) in manakov_labels(max_power).into_iter().enumerate() {
        if (k - j) % 2 == 0 && j != k {
            idx.push(offset + p);
        }
    }
    idx
}

fn invariant_errors(body: &InertiaSpec, m0: &SkewMatrix, dt: f64, t_end: f64) -> Result<Vec<f64>, String> {
    let settings = IntegratorSettings::new(dt, t_end).record_every(usize::MAX);
    let traj = integrate(body, BodyState::new(m0.clone()), &settings).map_err(|e| e.to_string())?;
    let first: Vec<f64> = traj.samples[0].invariants.values().collect();
    let last: Vec<f64> = traj.samples.last().unwrap().invariants.values().collect();
    Ok(first.iter().zip(&last).map(|(a, b)| (b - a).abs()).collect())
}

fn criterion_conservation() -> Outcome {
    let n = 4;
    let mut r = rng(5);
    let body = random_body(n, &mut r);
    let m = random_skew(n, &mut r);
    // ‖Ω‖_F = 2 keeps truncation error well above roundoff at dt = 0.1
    let m = m.scale(2.0 / inertia_invert(&m, &body).map_err(|e| e.to_string())?.norm());
    let live = live_invariants(n, n);
    let coarse = invariant_errors(&body, &m, 0.1, 1.0)?;
    let fine = invariant_errors(&body, &m, 0.05, 1.0)?;
    let mut slopes = Vec::new();
    for &i in &live {
        let s = halving_slope(coarse[i], fine[i]);
        slopes.push(s);
        check((3.5..=4.5).contains(&s), || {
            format!("invariant {i}: slope {s:.3} (errors {:e} → {:e})", coarse[i], fine[i])
        })?;
    }
    let settings = IntegratorSettings::new(1e-3, 10.0).record_every(100);
    let traj = integrate(&body, BodyState::new(m.clone()), &settings).map_err(|e| e.to_string())?;
    let first: Vec<f64> = traj.samples[0].invariants.values().collect();
    let mut worst = 0.0f64;
    for s in &traj.samples {
        let now: Vec<f64> = s.invariants.values().collect();
        for &i in &live {
            worst = worst.max((now[i] - first[i]).abs() / first[i].abs().max(f64::MIN_POSITIVE));
        }
    }
    check(worst < 1e-7, || format!("relative drift {worst:e} at dt = 1e-3"))?;
    let (lo, hi) = slopes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
    Ok(format!(
        "{} invariants, slopes in [{lo:.3}, {hi:.3}], drift {worst:.2e} over t = 10",
        live.len()
    ))
}

/// Vector Euler top `ṁ = m × ω`, `ωᵢ = mᵢ/Iᵢ`, classical RK4.
fn euler_top(m: [f64; 3], inertia: [f64; 3], dt: f64, steps: usize) -> [f64; 3] {
    let f = |m: [f64; 3]| {
        let w = [m[0] / inertia[0], m[1] / inertia[1], m[2] / inertia[2]];
        [
            m[1] * w[2] - m[2] * w[1],
            m[2] * w[0] - m[0] * w[2],
            m[0] * w[1] - m[1] * w[0],
        ]
    };
    let add = |a: [f64; 3], b: [f64; 3], h: f64| [a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]];
    let mut m = m;
    for _ in 0..steps {
        let k1 = f(m);
        let k2 = f(add(m, k1, dt / 2.0));
        let k3 = f(add(m, k2, dt / 2.0));
        let k4 = f(add(m, k3, dt));
        for i in 0..3 {
            m[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    m
}

/// `hat(m)`: `M₀₁ = −m₃`, `M₀₂ = m₂`, `M₁₂ = −m₁`.
fn hat(m: [f64; 3]) -> SkewMatrix {
    let mut s = SkewMatrix::zeros(3);
    s.set(0, 1, -m[2]);
    s.set(0, 2, m[1]);
    s.set(1, 2, -m[0]);
    s
}

fn plane_equilibrium(body: &InertiaSpec, i: usize, j: usize, w: f64) -> Result<SkewMatrix, String> {
    let mut o = SkewMatrix::zeros(body.n());
    o.set(i, j, w);
    inertia_apply(&o, body).map_err(|e| e.to_string())
}

fn criterion_euler_top() -> Outcome {
    let lambda = [1.0, 2.0, 3.0];
    let body = diagonal_body(&lambda);
    let inertia = [lambda[1] + lambda[2], lambda[0] + lambda[2], lambda[0] + lambda[1]];
    let m0 = [0.3, 1.0, -0.5];
    let traj = integrate(
        &body,
        BodyState::new(hat(m0)),
        &IntegratorSettings::new(1e-3, 1.0).record_every(100),
    )
    .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for s in &traj.samples {
        let steps = (s.t / 1e-4).round() as usize;
        let oracle = hat(euler_top(m0, inertia, 1e-4, steps));
        worst = worst.max(ndtop::linalg::max_abs(s.state.m.as_matrix() - oracle.as_matrix()));
    }
    check(worst <= 1e-8, || format!("componentwise deviation {worst:e}"))?;

    let settings = ProbeSettings {
        seed: 11,
        ..ProbeSettings::new(1e-6, 100.0, 100.0)
    };
    // planes (0,2), (1,2), (0,1) carry the middle, largest and smallest moments
    let middle =
        instability_probe(&plane_equilibrium(&body, 0, 2, 1.0)?, &body, &settings).map_err(|e| e.to_string())?;
    check(middle.escaped, || "middle axis did not escape".into())?;
    for (i, j, label) in [(1, 2, "largest"), (0, 1, "smallest")] {
        let p =
            instability_probe(&plane_equilibrium(&body, i, j, 1.0)?, &body, &settings).map_err(|e| e.to_string())?;
        check(!p.escaped, || format!("{label} axis escaped at t = {:?}", p.exit_time))?;
    }
    Ok(format!(
        "oracle deviation {worst:.2e}; middle axis escapes at t = {:.2}, outer axes stay within 100·eps",
        middle.exit_time.unwrap_or(f64::NAN)
    ))
}

struct KernelFixture {
    label: &'static str,
    body: InertiaSpec,
    recipe: GeneratorRecipe,
    /// Frozen (kernel_dim, stabilizer_dim).
    expected: (usize, usize),
}

fn std_block(omega: f64, axes: &[usize]) -> ndtop::equilibria::RecipeBlock {
    block(omega, axes.to_vec(), StructureSource::Standard)
}

fn rnd_block(omega: f64, axes: &[usize], seed: u64) -> ndtop::equilibria::RecipeBlock {
    block(omega, axes.to_vec(), StructureSource::Random { seed: Some(seed) })
}

fn recipe(blocks: Vec<ndtop::equilibria::RecipeBlock>, fixed: &[usize]) -> GeneratorRecipe {
    GeneratorRecipe {
        blocks,
        fixed_axes: fixed.to_vec(),
    }
}

fn kernel_fixtures() -> Vec<KernelFixture> {
    let b4 = || diagonal_body(&[1.0, 2.0, 3.0, 4.0]);
    let b6 = || diagonal_body(&[1.0, 1.7, 2.3, 3.1, 4.2, 5.0]);
    let mut v = vec![
        KernelFixture {
            label: "n4 regular two planes",
            body: b4(),
            recipe: recipe(vec![std_block(1.0, &[0, 1]), std_block(2.0, &[2, 3])], &[]),
            expected: (2, 2),
        },
        KernelFixture {
            label: "n4 regular crossed planes",
            body: b4(),
            recipe: recipe(vec![std_block(1.5, &[1, 3]), std_block(0.7, &[0, 2])], &[]),
            expected: (2, 2),
        },
        KernelFixture {
            label: "n4 regular one plane",
            body: b4(),
            recipe: recipe(vec![std_block(1.0, &[0, 2])], &[1, 3]),
            expected: (2, 2),
        },
        KernelFixture {
            label: "n6 regular three planes",
            body: b6(),
            recipe: recipe(
                vec![
                    std_block(1.0, &[0, 1]),
                    std_block(2.0, &[2, 3]),
                    std_block(3.0, &[4, 5]),
                ],
                &[],
            ),
            expected: (3, 3),
        },
        KernelFixture {
            label: "n6 regular two planes",
            body: b6(),
            recipe: recipe(vec![std_block(1.0, &[0, 3]), std_block(1.4, &[2, 5])], &[1, 4]),
            expected: (3, 3),
        },
    ];
    for seed in 1..=4 {
        v.push(KernelFixture {
            label: "n4 exotic",
            body: b4(),
            recipe: recipe(vec![rnd_block(1.0, &[0, 1, 2, 3], seed)], &[]),
            expected: (3, 2),
        });
    }
    for seed in 1..=2 {
        v.push(KernelFixture {
            label: "n6 exotic six axes",
            body: b6(),
            recipe: recipe(vec![rnd_block(1.0, &[0, 1, 2, 3, 4, 5], seed)], &[]),
            expected: (7, 3),
        });
        v.push(KernelFixture {
            label: "n6 exotic four axes + plane",
            body: b6(),
            recipe: recipe(vec![rnd_block(1.0, &[0, 2, 3, 5], seed), std_block(1.6, &[1, 4])], &[]),
            expected: (4, 3),
        });
        v.push(KernelFixture {
            label: "n6 exotic four axes + fixed",
            body: b6(),
            recipe: recipe(vec![rnd_block(1.0, &[1, 2, 4, 5], seed)], &[0, 3]),
            expected: (4, 3),
        });
    }
    v
}

/// Stabilizer dimension from the spectrum of `M`: `p²` for each non-zero
/// frequency of multiplicity `p`, plus `d(d−1)/2` for a kernel of dimension `d`.
fn stabilizer_from_spectrum(m: &SkewMatrix) -> Result<usize, String> {
    let planes = canonical_planes(m, 1e-9).map_err(|e| e.to_string())?;
    let freqs = planes.frequencies();
    let mut dim = 0;
    let mut i = 0;
    while i < freqs.len() {
        let mut p = 1;
        while i + p < freqs.len() && (freqs[i] - freqs[i + p]).abs() <= 1e-7 * freqs[i] {
            p += 1;
        }
        dim += p * p;
        i += p;
    }
    let d = planes.fixed_subspace.ncols();
    Ok(dim + d * (d.saturating_sub(1)) / 2)
}

fn criterion_non_isolation() -> Outcome {
    let mut min_slope = f64::INFINITY;
    let mut max_generic = 0.0f64;
    let fixtures = kernel_fixtures();
    for (idx, f) in fixtures.iter().enumerate() {
        let (m, s) = generate(&f.recipe, &f.body, 0).map_err(|e| e.to_string())?;
        let k = orbit_kernel(&m, &f.body, DEFAULT_RANK_TOL).map_err(|e| e.to_string())?;
        let tag = format!("fixture {idx} ({})", f.label);
        let spectral = stabilizer_from_spectrum(&m)?;
        check(k.stabilizer_dim == spectral, || {
            format!("{tag}: stabilizer {} vs spectral count {spectral}", k.stabilizer_dim)
        })?;
        check((k.kernel_dim, k.stabilizer_dim) == f.expected, || {
            format!(
                "{tag}: (kernel, stabilizer) = ({}, {}), frozen {:?}",
                k.kernel_dim, k.stabilizer_dim, f.expected
            )
        })?;
        if s.regular {
            check(k.excess() == 0, || format!("{tag}: regular with excess {}", k.excess()))?;
        } else {
            check(k.excess() >= 1, || format!("{tag}: exotic with excess {}", k.excess()))?;
        }
        let dirs = excess_kernel_directions(&m, &f.body, DEFAULT_RANK_TOL).map_err(|e| e.to_string())?;
        check(dirs.len() as isize == k.excess(), || {
            format!("{tag}: {} excess directions for excess {}", dirs.len(), k.excess())
        })?;
        for xi in &dirs {
            let slope = residual_decay_slope(&m, &f.body, xi, 1e-4)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("{tag}: residual vanished along a kernel direction"))?;
            min_slope = min_slope.min(slope);
            check(slope >= 1.8, || format!("{tag}: kernel-direction slope {slope:.3}"))?;
        }
        // a generic orbit direction leaves the equilibrium set at first order
        let xi = random_unit_skew(f.body.n(), 7 + idx as u64);
        if let Some(slope) = residual_decay_slope(&m, &f.body, &xi, 1e-4).map_err(|e| e.to_string())? {
            max_generic = max_generic.max(slope);
            check(slope < 1.5, || format!("{tag}: generic direction slope {slope:.3}"))?;
        }
    }
    Ok(format!(
        "{} fixtures match frozen kernels; kernel slopes ≥ {min_slope:.3}, generic slopes ≤ {max_generic:.3}",
        fixtures.len()
    ))
}

fn criterion_linearization() -> Outcome {
    let mut points: Vec<(String, InertiaSpec, SkewMatrix)> = Vec::new();
    let b3 = diagonal_body(&[1.0, 2.0, 3.0]);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        points.push((
            format!("n3 plane ({i},{j})"),
            b3.clone(),
            plane_equilibrium(&b3, i, j, 1.0)?,
        ));
    }
    points.push(("n3 at rest".into(), b3.clone(), SkewMatrix::zeros(3)));
    for f in kernel_fixtures() {
        let (m, _) = generate(&f.recipe, &f.body, 0).map_err(|e| e.to_string())?;
        points.push((f.label.to_string(), f.body, m));
    }
    let mut worst = 0.0f64;
    for (label, body, m) in &points {
        let rep = linearize(m, body).map_err(|e| format!("{label}: {e}"))?;
        worst = worst.max(rep.fd_relative_deviation);
        check(rep.fd_relative_deviation <= 1e-5, || {
            format!("{label}: relative deviation {:e}", rep.fd_relative_deviation)
        })?;
    }
    Ok(format!(
        "{} equilibria, worst relative deviation {worst:.2e}",
        points.len()
    ))
}

/// The generate → classify → stability chain through its JSON documents.
fn pipeline() -> Result<Vec<String>, String> {
    let body = diagonal_body(&[1.0, 1.7, 2.3, 3.1, 4.2, 5.0]);
    let recipe_text = r#"{"blocks": [
        {"omega": 1.0, "axes": [0, 2, 3, 5], "structure_source": {"random": {}}},
        {"omega": 1.6, "axes": [1, 4], "structure_source": "standard"}]}"#;
    let recipe: GeneratorRecipe = from_json_str(recipe_text).map_err(|e| e.to_string())?;
    let (m, structure) = generate(&recipe, &body, 2024).map_err(|e| e.to_string())?;
    let momentum_json = to_json_string(&MatrixDoc::from_skew(&m));
    let structure_json = to_json_string(&structure);

    let m_back = from_json_str::<MatrixDoc>(&momentum_json)
        .and_then(|d| d.to_skew(""))
        .map_err(|e| e.to_string())?;
    let classified: EquilibriumStructure =
        classify(&m_back, &body, &ClassifyOptions::default()).map_err(|e| e.to_string())?;
    let classified_json = to_json_string(&classified);
    check(classified_json == structure_json, || {
        "classify output differs from generate output".into()
    })?;

    let kernel_json = to_json_string(&orbit_kernel(&m_back, &body, DEFAULT_RANK_TOL).map_err(|e| e.to_string())?);
    let spectrum_json = to_json_string(&linearize(&m_back, &body).map_err(|e| e.to_string())?);
    let settings = ProbeSettings {
        seed: 2024,
        ..ProbeSettings::new(1e-6, 10.0, 100.0)
    };
    let probe_json = to_json_string(&instability_probe(&m_back, &body, &settings).map_err(|e| e.to_string())?);
    Ok(vec![
        momentum_json,
        structure_json,
        classified_json,
        kernel_json,
        spectrum_json,
        probe_json,
    ])
}

fn criterion_determinism() -> Outcome {
    let a = pipeline()?;
    let b = pipeline()?;
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        check(x.as_bytes() == y.as_bytes(), || {
            format!("document {i} differs between runs")
        })?;
    }
    let bytes: usize = a.iter().map(String::len).sum();
    Ok(format!(
        "{} documents ({bytes} bytes) identical across runs; classify reproduces generate",
        a.len()
    ))
}

fn main() {
    let cases = recipe_suite();
    let results: Vec<(&str, Outcome)> = vec![
        ("criterion equivalence", criterion_equivalence()),
        ("generator soundness", criterion_soundness(&cases)),
        ("classifier round-trip", criterion_round_trip(&cases)),
        ("regular/exotic discrimination", criterion_discrimination()),
        ("conservation order", criterion_conservation()),
        ("n = 3 Euler top", criterion_euler_top()),
        ("non-isolation signature", criterion_non_isolation()),
        ("linearization vs finite differences", criterion_linearization()),
        ("pipeline determinism", criterion_determinism()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
