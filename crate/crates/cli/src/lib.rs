//! Command-line front end for the `obsclone` library.
//!
//! [`run`] parses arguments and computes a [`CommandOutcome`] without touching
//! stdout, stderr or the filesystem (apart from reading input files), so the
//! binary is a thin shell around it.

use std::ffi::OsString;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use obsclone::classes::ObservableClass;
use obsclone::format::{to_csv, to_json};
use obsclone::jointmeas::{
    bloch_shrink, intrinsic_variance, optimal_theta, scan_t_machine, theta_grid,
    uncertainty_product, universal_clone_product, UncertaintyReport, UNIVERSAL_PRODUCT_REFERENCE,
    UNIVERSAL_SHRINK,
};
use obsclone::linalg::{Branch, QubitState};
use obsclone::machines::{
    cnot_machine, commuting_machine, one_param_machine, phase_covariant_machine, t_machine, verify,
    CloningMachine, DEFAULT_TOL, SINGULAR_EPS,
};
use obsclone::pauli::Observable;
use obsclone::search::{assemble_machine, search_machine, Mode, SearchConfig, SearchResult};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "obsclone", version, about = "Cloning machines for qubit observables")]
pub struct Cli {
    /// Write the payload to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for randomised commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance (verify: 1e-10, search: 1e-6 when omitted).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a known machine as JSON.
    Build {
        #[command(subcommand)]
        machine: BuildMachine,
    },
    /// Check a machine file; exit 1 if any defect reaches the tolerance.
    Verify { file: PathBuf },
    /// Uncertainty products of the T machine over a θ grid, as CSV.
    Scan(ScanArgs),
    /// Search for a machine cloning the class in CLASS_FILE.
    Search {
        class_file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        /// Objective evaluations per restart.
        #[arg(long, default_value_t = 20_000)]
        max_evals: usize,
    },
    /// Observable cloning against universal state cloning for one input.
    Compare {
        #[arg(long, default_value = "0,0,1", allow_hyphen_values = true)]
        state: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum BuildMachine {
    Cnot,
    OneParam {
        /// Coefficients a0,a1,a2,a3 of the cloned observable.
        #[arg(long, default_value = "0,0,0,1", allow_hyphen_values = true)]
        obs: String,
    },
    Commuting {
        #[arg(long, default_value = "0,0,0,1", allow_hyphen_values = true)]
        obs: String,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        b0: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        b3: f64,
    },
    T {
        #[arg(long, default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
        theta: f64,
    },
    PhaseCovariant {
        #[arg(long, default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
        theta: f64,
    },
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub theta_min: f64,
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value = "0,0,1", allow_hyphen_values = true)]
    pub state: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Exact,
    Approximate,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Approximate => Mode::Approximate,
        }
    }
}

/// Exit code, payload, and diagnostics destined for stderr.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub payload: String,
    pub diagnostics: Vec<String>,
    /// Where the payload goes; `None` means stdout.
    pub out: Option<PathBuf>,
}

impl CommandOutcome {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            exit_code: EXIT_USAGE,
            payload: String::new(),
            diagnostics: vec![message.into()],
            out: None,
        }
    }
}

type CmdResult = std::result::Result<(i32, String, Vec<String>), String>;

pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CommandOutcome {
                    exit_code: EXIT_OK,
                    payload: text,
                    diagnostics: Vec::new(),
                    out: None,
                }
            } else {
                CommandOutcome::usage(text.trim_end())
            };
        }
    };
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return CommandOutcome::usage(format!("--tol must be positive and finite, got {tol}"));
        }
    }
    let result = match &cli.command {
        Command::Build { machine } => cmd_build(machine),
        Command::Verify { file } => cmd_verify(file, cli.tol.unwrap_or(DEFAULT_TOL)),
        Command::Scan(args) => cmd_scan(args),
        Command::Search {
            class_file,
            mode,
            restarts,
            max_evals,
        } => cmd_search(
            class_file,
            (*mode).into(),
            SearchConfig {
                restarts: *restarts,
                max_evals: *max_evals,
                seed: cli.seed,
                tol: cli.tol.unwrap_or(SearchConfig::default().tol),
            },
        ),
        Command::Compare { state } => cmd_compare(state),
    };
    match result {
        Ok((exit_code, payload, diagnostics)) => CommandOutcome {
            exit_code,
            payload,
            diagnostics,
            out: cli.out,
        },
        Err(message) => CommandOutcome::usage(message),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> std::result::Result<String, String> {
    to_json(value).map_err(|e| format!("cannot serialise output: {e}"))
}

fn parse_floats<const N: usize>(text: &str, what: &str) -> std::result::Result<[f64; N], String> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| format!("{what}: {e} in '{text}'"))?;
    values
        .try_into()
        .map_err(|v: Vec<f64>| format!("{what}: expected {N} comma-separated numbers, got {}", v.len()))
}

fn parse_state(text: &str) -> std::result::Result<QubitState, String> {
    let b = parse_floats::<3>(text, "--state")?;
    QubitState::new(b).map_err(|e| format!("--state: {e}"))
}

fn parse_observable(text: &str) -> std::result::Result<Observable, String> {
    let c = parse_floats::<4>(text, "--obs")?;
    Observable::new(c).map_err(|e| format!("--obs: {e}"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf, what: &str) -> std::result::Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {what} file {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("malformed {what} file {}: {e}", path.display()))
}

fn cmd_build(machine: &BuildMachine) -> CmdResult {
    let m = match machine {
        BuildMachine::Cnot => Ok(cnot_machine()),
        BuildMachine::OneParam { obs } => one_param_machine(&parse_observable(obs)?),
        BuildMachine::Commuting { obs, b0, b3 } => commuting_machine(&parse_observable(obs)?, *b0, *b3),
        BuildMachine::T { theta } => t_machine(*theta),
        BuildMachine::PhaseCovariant { theta } => phase_covariant_machine(*theta),
    }
    .map_err(|e| e.to_string())?;
    Ok((EXIT_OK, json(&m)?, Vec::new()))
}

fn cmd_verify(file: &PathBuf, tol: f64) -> CmdResult {
    let m: CloningMachine = read_json(file, "machine")?;
    let mut report = verify(&m, tol);
    let mut notes = Vec::new();
    if tol < f64::EPSILON {
        // Defects are computed in binary64; a bound finer than its resolution
        // cannot be certified.
        report.passed = false;
        notes.push(format!(
            "tolerance {tol:e} is below double-precision resolution {:e}; not certified",
            f64::EPSILON
        ));
    }
    let code = if report.passed { EXIT_OK } else { EXIT_FAILED };
    Ok((code, json(&report)?, notes))
}

fn cmd_scan(args: &ScanArgs) -> CmdResult {
    let state = parse_state(&args.state)?;
    if args.steps == 0 {
        return Err("--steps must be at least 1".into());
    }
    if !(args.theta_min.is_finite() && args.theta_max.is_finite()) {
        return Err("θ bounds must be finite".into());
    }
    let thetas = theta_grid(args.theta_min, args.theta_max, args.steps);
    let mut rows: Vec<UncertaintyReport> = Vec::new();
    let mut notes = Vec::new();
    for (theta, report) in thetas.iter().zip(scan_t_machine(&state, &thetas)) {
        match report {
            Ok(r) => rows.push(r),
            Err(e) => notes.push(format!("skipping θ = {theta}: {e}")),
        }
    }
    Ok((EXIT_OK, to_csv(&rows), notes))
}

#[derive(Serialize)]
struct SearchPayload<'a> {
    #[serde(flatten)]
    result: &'a SearchResult,
    mode: Mode,
    /// The best point assembled into a machine file, ready for `verify`.
    machine: CloningMachine,
}

fn cmd_search(class_file: &PathBuf, mode: Mode, config: SearchConfig) -> CmdResult {
    let class: ObservableClass = read_json(class_file, "class")?;
    if config.restarts == 0 {
        return Err("--restarts must be at least 1".into());
    }
    let result = search_machine(&class, mode, &config);
    let payload = SearchPayload {
        result: &result,
        mode,
        machine: assemble_machine(&result.best_point, &class, mode),
    };
    let code = if result.converged { EXIT_OK } else { EXIT_FAILED };
    Ok((code, json(&payload)?, Vec::new()))
}

#[derive(Serialize)]
struct ProductSummary {
    theta: f64,
    product: f64,
    lower_bound: f64,
}

#[derive(Serialize)]
struct Comparison {
    state: [f64; 3],
    delta_i1: f64,
    delta_i2: f64,
    observable_cloning: ProductSummary,
    phase_covariant: ProductSummary,
    universal_cloning: ProductSummary,
    shrink_observable: f64,
    shrink_universal: f64,
    paper_reference_value: f64,
}

fn cmd_compare(state: &str) -> CmdResult {
    let state = parse_state(state)?;
    let [di1, di2] = [1, 2].map(|k| intrinsic_variance(&state, &Observable::pauli(k)));
    // The optimum sits at θ = 0 or π/2 when one intrinsic variance vanishes;
    // stay just inside the admissible range.
    let margin = 1e3 * SINGULAR_EPS;
    let theta = optimal_theta(di1, di2).clamp(margin, FRAC_PI_2 - margin);
    let summary = |r: UncertaintyReport| ProductSummary {
        theta: r.theta,
        product: r.product,
        lower_bound: r.lower_bound,
    };
    let t = t_machine(theta).map_err(|e| e.to_string())?;
    let pc = phase_covariant_machine(theta).map_err(|e| e.to_string())?;
    let observable = uncertainty_product(&t, &state).map_err(|e| e.to_string())?;
    let phase = uncertainty_product(&pc, &state).map_err(|e| e.to_string())?;
    let universal = universal_clone_product(&state);
    let shrink = bloch_shrink(&t_machine(FRAC_PI_4).map_err(|e| e.to_string())?, Branch::Signal)[0];
    let cmp = Comparison {
        state: state.bloch(),
        delta_i1: di1,
        delta_i2: di2,
        observable_cloning: summary(observable),
        phase_covariant: summary(phase),
        universal_cloning: summary(universal),
        shrink_observable: shrink,
        shrink_universal: UNIVERSAL_SHRINK,
        paper_reference_value: UNIVERSAL_PRODUCT_REFERENCE,
    };
    Ok((EXIT_OK, json(&cmp)?, Vec::new()))
}
