use super::{inertia_invert, manakov_labels, vector_field, BodyError, BodyState, InertiaSpec, InvariantReport};
use crate::linalg::{gram_project_orthonormal, Matrix, SkewMatrix};
use serde::{Deserialize, Serialize};

/// What to do when `dt·‖Ω₀‖_F` exceeds 0.5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuardPolicy {
    #[default]
    Reject,
    Warn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSettings {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    /// Highest power `k` in the Manakov traces; defaults to `n`.
    #[serde(default)]
    pub max_power: Option<usize>,
    #[serde(default)]
    pub guard: GuardPolicy,
}

fn default_record_every() -> usize {
    1
}

impl IntegratorSettings {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self {
            dt,
            t_end,
            record_every: 1,
            max_power: None,
            guard: GuardPolicy::Reject,
        }
    }

    pub fn record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    /// Number of steps, `round(t_end / dt)`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    fn validate(&self) -> Result<(), BodyError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(BodyError::BadStep(self.dt));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(BodyError::Settings(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(BodyError::Settings("record_every must be at least 1".into()));
        }
        if self.steps() == 0 {
            return Err(BodyError::Settings("t_end is shorter than one step".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: BodyState,
    pub invariants: InvariantReport,
}

/// Largest relative change of each monitored quantity over a run,
/// `max |f(t) − f(0)| / max(1, |f(0)|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftSummary {
    pub energy: f64,
    pub casimirs: Vec<f64>,
    pub manakov: Vec<f64>,
    /// `max ‖M(t) − M(0)‖ / ‖M(0)‖` over every step (absolute when `M(0) = 0`).
    pub state_deviation: f64,
}

impl DriftSummary {
    fn start(first: &InvariantReport) -> Self {
        Self {
            energy: 0.0,
            casimirs: vec![0.0; first.casimirs.len()],
            manakov: vec![0.0; first.manakov.len()],
            state_deviation: 0.0,
        }
    }

    fn update(&mut self, first: &InvariantReport, now: &InvariantReport) {
        let rel = |a: f64, b: f64| (b - a).abs() / a.abs().max(1.0);
        self.energy = self.energy.max(rel(first.energy, now.energy));
        for (d, (a, b)) in self.casimirs.iter_mut().zip(first.casimirs.iter().zip(&now.casimirs)) {
            *d = d.max(rel(*a, *b));
        }
        for (d, (a, b)) in self.manakov.iter_mut().zip(first.manakov.iter().zip(&now.manakov)) {
            *d = d.max(rel(*a, *b));
        }
    }

    /// Largest drift over all invariants.
    pub fn max_invariant(&self) -> f64 {
        std::iter::once(self.energy)
            .chain(self.casimirs.iter().copied())
            .chain(self.manakov.iter().copied())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Spacing between consecutive samples.
    pub step: f64,
    pub dt: f64,
    pub integrator: &'static str,
    pub max_power: usize,
    pub drift: DriftSummary,
    /// Set when the step guard tripped under [`GuardPolicy::Warn`].
    pub guard_warning: Option<f64>,
}

impl Trajectory {
    /// Column names for tabular export: `t`, upper-triangle `m_i_j`, `energy`,
    /// `casimir_k`, `manakov_k_j`.
    pub fn columns(&self) -> Vec<String> {
        let n = self.samples.first().map(|s| s.state.m.n()).unwrap_or(0);
        let mut cols = vec!["t".to_string()];
        for i in 0..n {
            for j in (i + 1)..n {
                cols.push(format!("m_{i}_{j}"));
            }
        }
        cols.push("energy".into());
        for k in 1..=n / 2 {
            cols.push(format!("casimir_{k}"));
        }
        for (k, j) in manakov_labels(self.max_power) {
            cols.push(format!("manakov_{k}_{j}"));
        }
        cols
    }
}

impl Sample {
    /// Values in [`Trajectory::columns`] order.
    pub fn row(&self) -> Vec<f64> {
        let mut row = vec![self.t];
        row.extend(self.state.m.upper_entries());
        row.extend(self.invariants.values());
        row
    }
}

fn rhs(m: &SkewMatrix, x: Option<&Matrix>, body: &InertiaSpec) -> Result<(SkewMatrix, Option<Matrix>), BodyError> {
    let dm = vector_field(m, body)?;
    let dx = match x {
        Some(x) => Some(x * inertia_invert(m, body)?.as_matrix()),
        None => None,
    };
    Ok((dm, dx))
}

/// One classical RK4 step of `Ṁ = [M, Ω]`, together with `Ẋ = XΩ` when an
/// attitude is carried. The attitude is re-projected onto O(n) afterwards.
pub fn step_rk4(state: &BodyState, body: &InertiaSpec, dt: f64) -> Result<BodyState, BodyError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(BodyError::BadStep(dt));
    }
    let m0 = &state.m;
    let x0 = state.attitude.as_ref();
    let stage_x = |dx: &Option<Matrix>, h: f64| -> Option<Matrix> {
        match (x0, dx) {
            (Some(x), Some(d)) => Some(x + d * h),
            _ => None,
        }
    };

    let (k1, l1) = rhs(m0, x0, body)?;
    let m1 = m0.axpy(0.5 * dt, &k1);
    let x1 = stage_x(&l1, 0.5 * dt);
    let (k2, l2) = rhs(&m1, x1.as_ref(), body)?;
    let m2 = m0.axpy(0.5 * dt, &k2);
    let x2 = stage_x(&l2, 0.5 * dt);
    let (k3, l3) = rhs(&m2, x2.as_ref(), body)?;
    let m3 = m0.axpy(dt, &k3);
    let x3 = stage_x(&l3, dt);
    let (k4, l4) = rhs(&m3, x3.as_ref(), body)?;

    let m = m0
        .axpy(dt / 6.0, &k1)
        .axpy(dt / 3.0, &k2)
        .axpy(dt / 3.0, &k3)
        .axpy(dt / 6.0, &k4);
    if !m.is_finite() {
        return Err(BodyError::NonFinite { t: f64::NAN });
    }
    let attitude = match (x0, l1, l2, l3, l4) {
        (Some(x), Some(a), Some(b), Some(c), Some(d)) => {
            let raw = x + (a + b * 2.0 + c * 2.0 + d) * (dt / 6.0);
            Some(gram_project_orthonormal(&raw)?)
        }
        _ => None,
    };
    Ok(BodyState { m, attitude })
}

/// Fixed-step RK4 integration with invariant reports every `record_every` steps.
///
/// Invariant drift is measured on recorded samples; the state deviation
/// `‖M(t) − M(0)‖` is tracked at every step.
pub fn integrate(
    body: &InertiaSpec,
    initial: BodyState,
    settings: &IntegratorSettings,
) -> Result<Trajectory, BodyError> {
    settings.validate()?;
    let n = body.n();
    if initial.m.n() != n {
        return Err(BodyError::DimensionMismatch {
            body: n,
            matrix: initial.m.n(),
        });
    }
    let max_power = settings.max_power.unwrap_or(n).max(2);
    let dt = settings.dt;

    let omega_norm = inertia_invert(&initial.m, body)?.norm();
    let product = dt * omega_norm;
    let mut guard_warning = None;
    if product > 0.5 {
        match settings.guard {
            GuardPolicy::Reject => return Err(BodyError::StepGuard { product }),
            GuardPolicy::Warn => {
                log::warn!("dt·‖Ω‖ = {product:.3} exceeds 0.5; accuracy is not guaranteed");
                guard_warning = Some(product);
            }
        }
    }

    // the flow is equivariant, so step in J's eigenframe where 𝒥⁻¹ is entrywise;
    // attitude is carried as X·B
    let principal = body.principal();
    let basis = &body.frame().basis;
    let to_frame = |s: &BodyState| BodyState {
        m: s.m.conjugate(&basis.transpose()),
        attitude: s.attitude.as_ref().map(|x| x * basis),
    };
    let from_frame = |s: &BodyState| BodyState {
        m: s.m.conjugate(basis),
        attitude: s.attitude.as_ref().map(|y| y * basis.transpose()),
    };

    let first = InvariantReport::compute(&initial.m, body, max_power)?;
    let mut drift = DriftSummary::start(&first);
    let m0 = to_frame(&initial).m;
    let m0_norm = m0.norm();
    let dev_scale = if m0_norm > 0.0 { m0_norm } else { 1.0 };

    let steps = settings.steps();
    let mut samples = Vec::with_capacity(steps / settings.record_every + 1);
    let mut state = to_frame(&initial);
    samples.push(Sample {
        t: 0.0,
        state: initial,
        invariants: first.clone(),
    });
    for k in 1..=steps {
        let t = k as f64 * dt;
        state = step_rk4(&state, &principal, dt).map_err(|e| match e {
            BodyError::NonFinite { .. } => BodyError::NonFinite { t },
            other => other,
        })?;
        let dev = (state.m.as_matrix() - m0.as_matrix()).norm() / dev_scale;
        drift.state_deviation = drift.state_deviation.max(dev);
        if k % settings.record_every == 0 || k == steps {
            let invariants = InvariantReport::compute(&state.m, &principal, max_power)?;
            drift.update(&first, &invariants);
            samples.push(Sample {
                t,
                state: from_frame(&state),
                invariants,
            });
        }
    }

    Ok(Trajectory {
        samples,
        step: dt * settings.record_every as f64,
        dt,
        integrator: "rk4",
        max_power,
        drift,
        guard_warning,
    })
}
