use crate::exit::CliError;
use crate::output::{growth_csv, read_doc, trajectory_csv, trajectory_jsonl, Sink};
use crate::{Cli, Command};
use ndtop::equilibria::{classify, generate, is_equilibrium, ClassifyOptions, GeneratorRecipe};
use ndtop::io::{to_json_string, BodyDoc, MatrixDoc};
use ndtop::scenario::{InvariantSummary, ScenarioDoc, SimulationReport};
use ndtop::stability::{
    excess_kernel_directions, instability_probe, linearize, orbit_kernel, residual_decay_slope,
    spectrum_symmetry_defect, tangent_spectrum, LinearizationReport, OrbitKernelReport, ProbeSettings,
};
use ndtop::{InertiaSpec, SkewMatrix};
use serde::Serialize;
use std::path::Path;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    if !(cli.tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Simulate { scenario } => simulate(cli, scenario),
        Command::Classify {
            matrix,
            body,
            cluster_tol,
        } => cmd_classify(cli, matrix, body, *cluster_tol),
        Command::Generate { recipe, body } => cmd_generate(cli, recipe, body),
        Command::Stability { matrix, body, .. } => stability(cli, matrix, body),
    }
}

fn load_body(path: &Path) -> Result<InertiaSpec, CliError> {
    Ok(read_doc::<BodyDoc>(path)?.resolve("")?)
}

fn load_momentum(path: &Path, body: &InertiaSpec) -> Result<SkewMatrix, CliError> {
    let m = read_doc::<MatrixDoc>(path)?.to_skew("")?;
    if m.n() != body.n() {
        return Err(CliError::Input(format!(
            "{}: dimension {} does not match the body ({})",
            path.display(),
            m.n(),
            body.n()
        )));
    }
    Ok(m)
}

fn emit<T: Serialize>(sink: Option<&Sink>, name: &str, value: &T) -> Result<(), CliError> {
    let text = to_json_string(value);
    if let Some(sink) = sink {
        sink.write(name, text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

fn simulate(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let scenario = read_doc::<ScenarioDoc>(path)?.resolve()?;
    let traj = scenario.run()?;
    let sink = Sink::new(cli.output_dir.as_deref(), &[path]);
    let mut outputs = scenario.outputs.clone();
    if outputs == Default::default() {
        outputs.trajectory_csv = Some("trajectory.csv".into());
        outputs.invariants_json = Some("invariants.json".into());
    }
    if let Some(name) = &outputs.trajectory_csv {
        sink.write(name, &trajectory_csv(&traj)?)?;
    }
    if let Some(name) = &outputs.trajectory_jsonl {
        sink.write(name, &trajectory_jsonl(&traj))?;
    }
    if let Some(name) = &outputs.invariants_json {
        sink.write(name, to_json_string(&InvariantSummary::new(&traj)).as_bytes())?;
    }
    let report = SimulationReport::new(&scenario, &traj);
    if let Some(name) = &outputs.report_json {
        sink.write(name, to_json_string(&report).as_bytes())?;
    }
    print!("{}", to_json_string(&report));
    Ok(())
}

fn cmd_classify(cli: &Cli, matrix: &Path, body: &Path, cluster_tol: f64) -> Result<(), CliError> {
    let body_spec = load_body(body)?;
    let m = load_momentum(matrix, &body_spec)?;
    let opts = ClassifyOptions {
        tol: cli.tol,
        cluster_tol,
    };
    let structure = classify(&m, &body_spec, &opts)?;
    let sink = cli.output_dir.as_deref().map(|d| Sink::new(Some(d), &[matrix, body]));
    emit(sink.as_ref(), "structure.json", &structure)
}

fn cmd_generate(cli: &Cli, recipe: &Path, body: &Path) -> Result<(), CliError> {
    let body_spec = load_body(body)?;
    let recipe_doc = read_doc::<GeneratorRecipe>(recipe)?;
    let (m, structure) = generate(&recipe_doc, &body_spec, cli.seed)?;
    let sink = Sink::new(cli.output_dir.as_deref(), &[recipe, body]);
    sink.write("momentum.json", to_json_string(&MatrixDoc::from_skew(&m)).as_bytes())?;
    emit(Some(&sink), "structure.json", &structure)
}

#[derive(Serialize)]
struct KernelOutput {
    #[serde(flatten)]
    report: OrbitKernelReport,
    excess: isize,
    decay_step: f64,
    /// Residual order along each excess kernel direction.
    kernel_direction_slopes: Vec<Option<f64>>,
}

#[derive(Serialize)]
struct SpectrumOutput {
    #[serde(flatten)]
    linearization: LinearizationReport,
    tangent_spectrum: Vec<[f64; 2]>,
    tangent_symmetry_defect: f64,
}

fn stability(cli: &Cli, matrix: &Path, body: &Path) -> Result<(), CliError> {
    let Command::Stability {
        probe,
        kernel,
        rank_tol,
        eps,
        horizon,
        exit_factor,
        dt,
        record_every,
        decay_step,
        ..
    } = &cli.command
    else {
        unreachable!("dispatched on the stability command");
    };
    let body_spec = load_body(body)?;
    let m = load_momentum(matrix, &body_spec)?;
    let check = is_equilibrium(&m, &body_spec, cli.tol)?;
    if !check.equilibrium {
        return Err(CliError::NotEquilibrium {
            residual: check.residual,
        });
    }
    let sink = cli.output_dir.as_deref().map(|d| Sink::new(Some(d), &[matrix, body]));
    if *probe {
        let settings = ProbeSettings {
            eps: *eps,
            horizon: *horizon,
            exit_factor: *exit_factor,
            dt: *dt,
            seed: cli.seed,
            record_every: *record_every,
        };
        let report = instability_probe(&m, &body_spec, &settings)?;
        if let Some(sink) = &sink {
            sink.write("growth.csv", &growth_csv(&report.growth_curve)?)?;
        }
        emit(sink.as_ref(), "probe.json", &report)
    } else if *kernel {
        let report = orbit_kernel(&m, &body_spec, *rank_tol)?;
        let slopes = excess_kernel_directions(&m, &body_spec, *rank_tol)?
            .iter()
            .map(|xi| residual_decay_slope(&m, &body_spec, xi, *decay_step))
            .collect::<Result<Vec<_>, _>>()?;
        let out = KernelOutput {
            excess: report.excess(),
            report,
            decay_step: *decay_step,
            kernel_direction_slopes: slopes,
        };
        emit(sink.as_ref(), "kernel.json", &out)
    } else {
        let linearization = linearize(&m, &body_spec)?;
        let tangent = tangent_spectrum(&m, &body_spec, *rank_tol)?;
        let out = SpectrumOutput {
            linearization,
            tangent_symmetry_defect: spectrum_symmetry_defect(&tangent),
            tangent_spectrum: tangent.iter().map(|z| [z.re, z.im]).collect(),
        };
        emit(sink.as_ref(), "spectrum.json", &out)
    }
}
