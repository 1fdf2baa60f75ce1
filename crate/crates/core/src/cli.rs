//! Batch front end used by the `qdiff` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::json;

use crate::algorithms::basics::{bell_tape, execute_trace};
use crate::algorithms::gradcheck::grad_check;
use crate::algorithms::hybrid::{hybrid_train, synthetic_dataset, Sample};
use crate::algorithms::kernel::kernel_trace;
use crate::algorithms::portfolio::{portfolio_optimize, PortfolioProblem};
use crate::algorithms::qaoa::{qaoa_best_of, MaxCutProblem};
use crate::algorithms::vqe::{vqe_best_of, VqeProblem};
use crate::algorithms::{restart_seed, stream_rng, RunSettings, Trace};
use crate::circuit::{CircuitTape, Device};
use crate::data::{csv_header, ingest_csv, write_atomic, write_matrix_csv};
use crate::error::{Error, Result};
use crate::optimizers::OptimizerConfig;

pub const GRAD_CHECK_TAPES: usize = 50;
pub const KERNEL_SAMPLES: usize = 30;
pub const HYBRID_ROWS: usize = 100;
pub const DEFAULT_RESTARTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Bell,
    Vqe,
    Qaoa,
    Kernel,
    Portfolio,
    Hybrid,
    GradCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizerKind {
    Gd,
    Adam,
}

/// Run a variational experiment and write its trace.
#[derive(Debug, Clone, Parser)]
#[command(name = "qdiff", version)]
pub struct RunConfig {
    pub experiment: Experiment,

    /// Defaults: gd for vqe, adam otherwise.
    #[arg(long, value_enum)]
    pub optimizer: Option<OptimizerKind>,

    /// Defaults: 0.4 vqe, 0.1 qaoa/portfolio, 0.01 hybrid.
    #[arg(long)]
    pub stepsize: Option<f64>,

    /// Optimizer updates (epochs for hybrid). Defaults: 100 vqe/qaoa, 200 portfolio, 10 hybrid.
    #[arg(long)]
    pub iterations: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Independent runs for vqe and qaoa (default 5); the best is reported.
    #[arg(long)]
    pub restarts: Option<usize>,

    /// Sample expectations from N shots instead of the exact state.
    #[arg(long, value_name = "N")]
    pub shots: Option<u64>,

    /// Trace JSON destination.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// CSV input for kernel (two feature columns) or hybrid (eight plus a label).
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Comma-separated feature column names.
    #[arg(long, value_delimiter = ',')]
    pub features: Vec<String>,

    /// Label column for hybrid input.
    #[arg(long, default_value = "label")]
    pub label: String,

    /// Min-max scale input features onto [0, 2π].
    #[arg(long)]
    pub scale: bool,

    /// Gram matrix CSV destination (kernel only).
    #[arg(long)]
    pub kernel_output: Option<PathBuf>,

    /// Circuit in the text format; executed by bell, differentiated by grad-check.
    #[arg(long)]
    pub circuit: Option<PathBuf>,

    /// Comma-separated parameter values for --circuit.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Vec<f64>,
}

impl RunConfig {
    fn restarts(&self) -> usize {
        self.restarts.unwrap_or(DEFAULT_RESTARTS)
    }

    fn device(&self) -> Device {
        match self.shots {
            // one device stream per run, derived from the master seed
            Some(n) => Device::shots(n, restart_seed(self.seed, usize::MAX)),
            None => Device::analytic(),
        }
    }

    fn settings(&self, default_opt: OptimizerKind, stepsize: f64, iterations: usize) -> Result<RunSettings> {
        let step = self.stepsize.unwrap_or(stepsize);
        let opt = match self.optimizer.unwrap_or(default_opt) {
            OptimizerKind::Gd => OptimizerConfig::gd(step)?,
            OptimizerKind::Adam => OptimizerConfig::adam(step)?,
        };
        Ok(RunSettings::new(opt, self.iterations.unwrap_or(iterations)))
    }

    /// Rejects flag combinations the chosen experiment would ignore.
    pub fn validate(&self) -> Result<()> {
        use Experiment::*;
        let e = self.experiment;
        let reject = |flag: &str| {
            Err(Error::Validation(format!(
                "--{flag} is not used by {}",
                e.to_possible_value().expect("no skipped variants").get_name()
            )))
        };
        if self.restarts == Some(0) {
            return Err(Error::Validation("--restarts must be at least 1".into()));
        }
        if self.restarts.is_some() && !matches!(e, Vqe | Qaoa) {
            return reject("restarts");
        }
        if (self.optimizer.is_some() || self.stepsize.is_some() || self.iterations.is_some())
            && matches!(e, Bell | Kernel | GradCheck)
        {
            return reject("optimizer/stepsize/iterations");
        }
        if self.circuit.is_some() && !matches!(e, Bell | GradCheck) {
            return reject("circuit");
        }
        if !self.params.is_empty() && self.circuit.is_none() {
            return Err(Error::Validation("--params needs --circuit".into()));
        }
        if self.input.is_some() && !matches!(e, Kernel | Hybrid) {
            return reject("input");
        }
        if (self.scale || !self.features.is_empty()) && self.input.is_none() {
            return Err(Error::Validation("--scale and --features need --input".into()));
        }
        if self.kernel_output.is_some() && e != Kernel {
            return reject("kernel-output");
        }
        if self.shots.is_some() && matches!(e, GradCheck | Hybrid) {
            return reject("shots");
        }
        if self.shots == Some(0) {
            return Err(Error::Validation("--shots must be positive".into()));
        }
        Ok(())
    }
}

fn load_circuit(path: &PathBuf) -> Result<CircuitTape> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.parse()
}

fn kernel_samples(cfg: &RunConfig) -> Result<Vec<Vec<f64>>> {
    match &cfg.input {
        Some(path) => Ok(ingest_csv(path, &kernel_columns(cfg, path)?, cfg.scale)?.rows),
        None => {
            use rand::Rng;
            let mut rng = stream_rng(cfg.seed, "kernel-data", 0);
            Ok((0..KERNEL_SAMPLES)
                .map(|_| (0..2).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect())
                .collect())
        }
    }
}

/// Explicit `--features`, else every column except the label.
fn kernel_columns(cfg: &RunConfig, path: &PathBuf) -> Result<Vec<String>> {
    if !cfg.features.is_empty() {
        return Ok(cfg.features.clone());
    }
    Ok(csv_header(path)?.into_iter().filter(|c| *c != cfg.label).collect())
}

fn hybrid_samples(cfg: &RunConfig) -> Result<Vec<Sample>> {
    let Some(path) = &cfg.input else {
        return Ok(synthetic_dataset(HYBRID_ROWS, cfg.seed));
    };
    let features = kernel_columns(cfg, path)?;
    let x = ingest_csv(path, &features, cfg.scale)?;
    let y = ingest_csv(path, std::slice::from_ref(&cfg.label), false)?;
    x.rows
        .into_iter()
        .zip(y.rows)
        .enumerate()
        .map(|(i, (features, label))| {
            let label = match label[0] {
                0.0 => 0,
                1.0 => 1,
                l => {
                    return Err(Error::Parse {
                        line: i + 2,
                        message: format!("label {l} is not 0 or 1"),
                    })
                }
            };
            Ok(Sample { features, label })
        })
        .collect()
}

/// Runs the configured experiment, writes its artifacts and returns the trace.
pub fn dispatch(cfg: &RunConfig) -> Result<Trace> {
    cfg.validate()?;
    let device = cfg.device();
    let trace = match cfg.experiment {
        Experiment::Bell => match &cfg.circuit {
            Some(path) => execute_trace("circuit", &load_circuit(path)?, &device, &cfg.params, cfg.seed)?,
            None => execute_trace("bell", &bell_tape(), &device, &[], cfg.seed)?,
        },
        Experiment::Vqe => {
            let s = cfg.settings(OptimizerKind::Gd, 0.4, 100)?;
            vqe_best_of(&VqeProblem::h2(), &s, &device, cfg.restarts(), cfg.seed)?
        }
        Experiment::Qaoa => {
            let s = cfg.settings(OptimizerKind::Adam, 0.1, 100)?;
            qaoa_best_of(&MaxCutProblem::reference(), &s, &device, cfg.restarts(), cfg.seed)?
        }
        Experiment::Portfolio => {
            let s = cfg.settings(OptimizerKind::Adam, 0.1, 200)?;
            portfolio_optimize(&PortfolioProblem::reference(), &s, &device, cfg.seed)?
        }
        Experiment::Hybrid => {
            let s = cfg
                .settings(OptimizerKind::Adam, 0.01, 10)?
                .with_diff_method(crate::gradients::DiffMethod::ParameterShift);
            hybrid_train(&hybrid_samples(cfg)?, &s, &device, cfg.seed)?
        }
        Experiment::Kernel => {
            let (trace, k) = kernel_trace(&kernel_samples(cfg)?, &device, cfg.seed)?;
            if let Some(path) = &cfg.kernel_output {
                write_matrix_csv(path, &k)?;
            }
            trace
        }
        Experiment::GradCheck => match &cfg.circuit {
            Some(path) => {
                let tape = load_circuit(path)?;
                grad_check(cfg.seed, 1, Some((&tape, &cfg.params)))?
            }
            None => grad_check(cfg.seed, GRAD_CHECK_TAPES, None)?,
        },
    };
    if let Some(path) = &cfg.output {
        write_atomic(path, trace.to_json()?.as_bytes())?;
    }
    Ok(trace)
}

/// One JSON object on a single line.
pub fn error_line(err: &Error) -> String {
    json!({"error": err.kind(), "message": err.to_string()}).to_string()
}

/// Parses `args`, runs, prints the summary; returns the process exit code
/// (0 success, 1 runtime failure, 2 usage error).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(e) = cfg.validate() {
        eprintln!("{}", error_line(&e));
        return 2;
    }
    match dispatch(&cfg) {
        Ok(trace) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", trace.summary());
            0
        }
        Err(e) => {
            eprintln!("{}", error_line(&e));
            1
        }
    }
}
