use crate::exit::CliError;
use ndtop::io::{from_json_str, to_json_line};
use ndtop::Trajectory;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

pub fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    from_json_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Where a command's files go; refuses to overwrite any of its inputs.
pub struct Sink {
    dir: PathBuf,
    inputs: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<&Path>, inputs: &[&Path]) -> Self {
        Self {
            dir: dir.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(".")),
            inputs: inputs.iter().filter_map(|p| fs::canonicalize(p).ok()).collect(),
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write(&self, name: &str, contents: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::Input(format!("{}: {e}", parent.display())))?;
        }
        if let Ok(canon) = fs::canonicalize(&path) {
            if self.inputs.contains(&canon) {
                return Err(CliError::Input(format!(
                    "refusing to overwrite input file {}",
                    path.display()
                )));
            }
        }
        fs::write(&path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trajectory_csv(traj: &Trajectory) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Numeric(format!("csv: {e}"));
    w.write_record(traj.columns()).map_err(fail)?;
    for s in &traj.samples {
        w.write_record(s.row().into_iter().map(fmt_f64)).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::Numeric(format!("csv: {e}")))
}

#[derive(Serialize)]
struct JsonlSample<'a> {
    t: f64,
    m: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    attitude: Option<Vec<Vec<f64>>>,
    invariants: &'a ndtop::InvariantReport,
}

fn rows(a: &ndtop::Matrix) -> Vec<Vec<f64>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect())
        .collect()
}

pub fn trajectory_jsonl(traj: &Trajectory) -> Vec<u8> {
    let mut out = String::new();
    for s in &traj.samples {
        let line = JsonlSample {
            t: s.t,
            m: rows(s.state.m.as_matrix()),
            attitude: s.state.attitude.as_ref().map(rows),
            invariants: &s.invariants,
        };
        out.push_str(&to_json_line(&line));
        out.push('\n');
    }
    out.into_bytes()
}

pub fn growth_csv(curve: &[(f64, f64)]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Numeric(format!("csv: {e}"));
    w.write_record(["t", "deviation"]).map_err(fail)?;
    for &(t, d) in curve {
        w.write_record([fmt_f64(t), fmt_f64(d)]).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::Numeric(format!("csv: {e}")))
}
