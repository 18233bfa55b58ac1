//! Simulation scenario documents.
//!
//! ```json
//! {
//!   "schema_version": "1.0",
//!   "body": {"eigenvalues": [1, 2, 3]},
//!   "initial": {"n": 3, "kind": "skew", "rows": [[0, 1, 0], [-1, 0, 0.01], [0, -0.01, 0]]},
//!   "integrator": {"dt": 0.001, "t_end": 10, "record_every": 100},
//!   "outputs": {"trajectory_csv": "traj.csv", "report_json": "report.json"},
//!   "seed": 7
//! }
//! ```
//!
//! `recipe` (a [`GeneratorRecipe`]) may replace `initial`; exactly one is required.

use crate::body::{
    integrate, BodyError, BodyState, DriftSummary, InertiaSpec, IntegratorSettings, InvariantReport, Trajectory,
};
use crate::equilibria::{generate, EquilibriumError, EquilibriumStructure, GeneratorRecipe};
use crate::io::{check_version, BodyDoc, BodyDocError, MatrixDoc, SchemaError};
use crate::linalg::{Matrix, SkewMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioOutputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory_jsonl: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants_json: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_json: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    pub body: BodyDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<GeneratorRecipe>,
    pub integrator: IntegratorSettings,
    #[serde(default)]
    pub outputs: ScenarioOutputs,
    /// Base seed for unseeded random structures in `recipe`.
    #[serde(default)]
    pub seed: u64,
    /// Also integrate the attitude, starting from the identity.
    #[serde(default)]
    pub attitude: bool,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{0}")]
    Schema(#[from] SchemaError),
    #[error("body: {0}")]
    Body(BodyError),
    #[error("recipe: {0}")]
    Recipe(EquilibriumError),
}

impl From<BodyDocError> for ScenarioError {
    fn from(e: BodyDocError) -> Self {
        match e {
            BodyDocError::Schema(s) => Self::Schema(s),
            BodyDocError::Body(b) => Self::Body(b),
        }
    }
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub body: InertiaSpec,
    pub initial: SkewMatrix,
    /// Normal form of the initial state when it came from a recipe.
    pub structure: Option<EquilibriumStructure>,
    pub settings: IntegratorSettings,
    pub outputs: ScenarioOutputs,
    pub seed: u64,
    pub attitude: bool,
}

impl ScenarioDoc {
    pub fn resolve(&self) -> Result<Scenario, ScenarioError> {
        check_version(&self.schema_version, "")?;
        let body = self.body.resolve("body.")?;
        let (initial, structure) = match (&self.initial, &self.recipe) {
            (Some(doc), None) => {
                let m = doc.to_skew("initial.")?;
                if m.n() != body.n() {
                    return Err(SchemaError::at(
                        "initial.n",
                        format!("dimension {} does not match the body ({})", m.n(), body.n()),
                    )
                    .into());
                }
                (m, None)
            }
            (None, Some(recipe)) => {
                let (m, s) = generate(recipe, &body, self.seed).map_err(ScenarioError::Recipe)?;
                (m, Some(s))
            }
            _ => {
                return Err(SchemaError::at("", "exactly one of `initial` or `recipe` is required").into());
            }
        };
        Ok(Scenario {
            body,
            initial,
            structure,
            settings: self.integrator.clone(),
            outputs: self.outputs.clone(),
            seed: self.seed,
            attitude: self.attitude,
        })
    }
}

impl Scenario {
    pub fn run(&self) -> Result<Trajectory, BodyError> {
        let state = if self.attitude {
            BodyState::with_attitude(self.initial.clone(), Matrix::identity(self.body.n(), self.body.n()))?
        } else {
            BodyState::new(self.initial.clone())
        };
        integrate(&self.body, state, &self.settings)
    }
}

/// Invariant values at the start and end of a run together with their drift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantSummary {
    pub casimir_labels: Vec<String>,
    pub manakov_labels: Vec<String>,
    pub initial: InvariantReport,
    #[serde(rename = "final")]
    pub last: InvariantReport,
    pub drift: DriftSummary,
}

impl InvariantSummary {
    pub fn new(traj: &Trajectory) -> Self {
        let n = traj.samples.first().map(|s| s.state.m.n()).unwrap_or(0);
        let first = traj.samples.first().map(|s| s.invariants.clone());
        let last = traj.samples.last().map(|s| s.invariants.clone());
        Self {
            casimir_labels: (1..=n / 2).map(|k| format!("tr(M^{})", 2 * k)).collect(),
            manakov_labels: crate::body::manakov_labels(traj.max_power)
                .into_iter()
                .map(|(k, j)| format!("k={k},j={j}"))
                .collect(),
            initial: first.unwrap_or_default(),
            last: last.unwrap_or_default(),
            drift: traj.drift.clone(),
        }
    }
}

/// Run metadata and drift figures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n: usize,
    pub integrator: String,
    pub dt: f64,
    pub t_end: f64,
    pub steps: usize,
    pub samples: usize,
    pub max_power: usize,
    pub drift: DriftSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard_warning: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equilibrium: Option<EquilibriumStructure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_attitude_defect: Option<f64>,
}

impl SimulationReport {
    pub fn new(scenario: &Scenario, traj: &Trajectory) -> Self {
        let final_attitude_defect = traj.samples.last().and_then(|s| s.state.attitude.as_ref()).map(|x| {
            let n = x.nrows();
            (x.transpose() * x - Matrix::identity(n, n)).norm()
        });
        Self {
            n: scenario.body.n(),
            integrator: traj.integrator.to_string(),
            dt: traj.dt,
            t_end: scenario.settings.t_end,
            steps: scenario.settings.steps(),
            samples: traj.samples.len(),
            max_power: traj.max_power,
            drift: traj.drift.clone(),
            guard_warning: traj.guard_warning,
            equilibrium: scenario.structure.clone(),
            final_attitude_defect,
        }
    }
}
