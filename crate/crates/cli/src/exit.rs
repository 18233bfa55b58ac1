use ndtop::body::BodyError;
use ndtop::equilibria::EquilibriumError;
use ndtop::io::{BodyDocError, SchemaError};
use ndtop::scenario::ScenarioError;
use ndtop::{LinalgError, StabilityError};
use std::fmt;
use std::process::ExitCode;

/// Failure of a command, carrying its exit code class.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid input (exit 2).
    Input(String),
    /// Numerical abort (exit 3).
    Numeric(String),
    /// Exit 4.
    NotEquilibrium { residual: f64 },
    /// Exit 5.
    Ambiguous(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Input(_) => 2,
            Self::Numeric(_) => 3,
            Self::NotEquilibrium { .. } => 4,
            Self::Ambiguous(_) => 5,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input(m) => write!(f, "input error: {m}"),
            Self::Numeric(m) => write!(f, "numerical error: {m}"),
            Self::NotEquilibrium { residual } => write!(f, "not an equilibrium: residual {residual:e}"),
            Self::Ambiguous(m) => write!(f, "ambiguous classification: {m}"),
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NoConvergence { .. } | LinalgError::Singular { .. } => Self::Numeric(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<BodyError> for CliError {
    fn from(e: BodyError) -> Self {
        match e {
            BodyError::Linalg(l) => l.into(),
            BodyError::NonFinite { .. } | BodyError::StepGuard { .. } => Self::Numeric(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<BodyDocError> for CliError {
    fn from(e: BodyDocError) -> Self {
        match e {
            BodyDocError::Schema(s) => s.into(),
            BodyDocError::Body(b) => Self::Input(format!("body: {b}")),
        }
    }
}

impl From<EquilibriumError> for CliError {
    fn from(e: EquilibriumError) -> Self {
        match e {
            EquilibriumError::Body(b) => b.into(),
            EquilibriumError::Linalg(l) => l.into(),
            EquilibriumError::NotAnEquilibrium { residual } => Self::NotEquilibrium { residual },
            EquilibriumError::AmbiguousClustering { .. } | EquilibriumError::OddBlock { .. } => {
                Self::Ambiguous(e.to_string())
            }
            EquilibriumError::FormViolation { .. } => Self::Numeric(e.to_string()),
            EquilibriumError::NotComplexStructure { .. } | EquilibriumError::InvalidStructure(_) => {
                Self::Input(e.to_string())
            }
        }
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        match e {
            StabilityError::Body(b) => b.into(),
            StabilityError::Equilibrium(q) => q.into(),
            StabilityError::NotAnEquilibrium { residual } => Self::NotEquilibrium { residual },
            StabilityError::NoConvergence(_) => Self::Numeric(e.to_string()),
            StabilityError::BadParameter(_) => Self::Input(e.to_string()),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Schema(s) => s.into(),
            ScenarioError::Body(b) => Self::Input(format!("body: {b}")),
            ScenarioError::Recipe(r) => match CliError::from(r) {
                Self::Input(m) => Self::Input(format!("recipe: {m}")),
                other => other,
            },
        }
    }
}
