//! `rus-adqc` — scriptable front door to the ancilla-driven computation
//! toolkit.
//!
//! Subcommands: `kraus` (channel inspection), `synth1q` / `synth2q`
//! (repeat-until-success walks), `simulate` (multi-directive programs on a
//! small register), `hitting-stats` (Monte-Carlo cost estimates), `version`.
//!
//! Exit status: 0 on success, 2 on any validation problem, 3 when a round
//! cap cut a walk or a program short — in which case the partial output is
//! still written.  Stochastic commands require an explicit `--seed`; given
//! the same arguments the output is byte-identical, whatever
//! `RUS_ADQC_THREADS` says.

mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rus_adqc::channel::{BackActionReport, ChannelSpec, InteractionFlavor, KrausBranch};
use rus_adqc::protocol::{
    asymmetric_demo_program, bell_demo_program, run_program, GateRef, Program, RunLog,
};
use rus_adqc::qcore::operator::SquareOperator;
use rus_adqc::synth1q::{
    hitting_stats, run_until, Generators, HittingSummary, SynthTarget, TrialRecord, WalkTrajectory,
};
use rus_adqc::synth2q::{
    beta_distance, beta_hitting_stats, exact_grid_strength, exact_reachable_set, increments,
    run_until_beta, BetaTrajectory, BetaWalkParams, ExactReachability, ResidueWitness,
};

use report::{to_json, write_csv, CsvRow, Envelope};

const DEFAULT_ALPHA: f64 = std::f64::consts::FRAC_PI_8;
const DEFAULT_CAP: usize = 10_000_000;

#[derive(Parser)]
#[command(
    name = "rus-adqc",
    version,
    about = "Measurement-driven channels and repeat-until-success gate synthesis",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the measurement-induced channel at one coupling strength
    Kraus(KrausArgs),
    /// Walk a single qubit towards a target gate
    Synth1q(Synth1qArgs),
    /// Walk a qubit pair's entangling phase towards a target angle
    Synth2q(Synth2qArgs),
    /// Execute a multi-directive program on a simulated register
    Simulate(SimulateArgs),
    /// Hitting-time statistics over independently seeded walks
    HittingStats(StatsArgs),
    /// Print the tool version
    Version,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Full,
    Symmetric,
    ControlledOnly,
}

impl FlavorArg {
    fn core(self) -> InteractionFlavor {
        match self {
            FlavorArg::Full => InteractionFlavor::Full,
            FlavorArg::Symmetric => InteractionFlavor::Symmetric,
            FlavorArg::ControlledOnly => InteractionFlavor::ControlledOnly,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl FormatArg {
    fn name(self) -> &'static str {
        match self {
            FormatArg::Json => "json",
            FormatArg::Csv => "csv",
        }
    }
}

#[derive(Args)]
struct KrausArgs {
    /// Coupling strength in radians, strictly inside (0, pi/2)
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Register qubits coupled per round: 1 or 2
    #[arg(long, default_value_t = 1)]
    qubits: u8,
    #[arg(long, value_enum, default_value_t = FlavorArg::Full)]
    flavor: FlavorArg,
    /// Write output to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Synth1qArgs {
    /// Target gate: a name or product ("H", "T", "H*T", "Rz(0.3)") or a
    /// path to a JSON matrix {"dim":2,"entries":[[re,im],...]}
    #[arg(long)]
    target: String,
    /// Stopping tolerance in the gate metric, in (0, 1]
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Abort a walk after this many rounds
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// RNG seed; required — there is no silent default
    #[arg(long)]
    seed: u64,
    /// Independent walks; > 1 reports per-trial records plus a summary
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = FlavorArg::Full)]
    flavor: FlavorArg,
    /// Stop at any Pauli multiple of the target and report the byproduct
    #[arg(long)]
    pauli_tolerant: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Synth2qArgs {
    /// Coupling strength; defaults to pi/8, or to the canonical grid
    /// strength when --exact is given
    #[arg(long)]
    alpha: Option<f64>,
    /// Target entangling phase on the half-turn circle
    #[arg(long)]
    target_beta: f64,
    /// Stopping tolerance in radians, in (0, pi/2]; with --exact it
    /// defaults to 1e-9
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// RNG seed; required — there is no silent default
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Declare the strength-dependent increment rational: "p/q" asserts the
    /// underlying angle is p*pi/q, unlocking exact reachability output
    #[arg(long)]
    exact: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DemoArg {
    Bell,
    Asymmetric,
    AsymmetricExact,
}

#[derive(Args)]
struct SimulateArgs {
    /// Path to a program JSON file
    #[arg(long, conflicts_with = "demo", required_unless_present = "demo")]
    program: Option<PathBuf>,
    /// Run a built-in demonstration program instead of a file
    #[arg(long, value_enum)]
    demo: Option<DemoArg>,
    /// Master seed; required, and it overrides the file's master_seed
    #[arg(long)]
    seed: u64,
    /// Per-directive tolerance for the bell demo; other sources ignore it
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Single-qubit target (name, product, or matrix file) ...
    #[arg(long, required_unless_present = "target_beta", conflicts_with = "target_beta")]
    target: Option<String>,
    /// ... or a pair entangling-phase target on the half-turn circle
    #[arg(long)]
    target_beta: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// RNG seed; trial i is seeded with seed XOR i and can be replayed alone
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Interaction flavor for single-qubit walks; the phase walk has none
    #[arg(long, value_enum)]
    flavor: Option<FlavorArg>,
    #[arg(long)]
    pauli_tolerant: bool,
    /// Output format; this command defaults to csv
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Outcome {
    Clean,
    CapReached,
}

struct CliError(String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl From<rus_adqc::AdqcError> for CliError {
    fn from(e: rus_adqc::AdqcError) -> Self {
        CliError(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError(e.to_string())
    }
}

fn err(message: impl Into<String>) -> CliError {
    CliError(message.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| dispatch(cli.command)) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::CapReached) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `RUS_ADQC_THREADS` caps how many trials run at once; unset means rayon's
/// default.  The trial -> seed map is fixed, so the cap never changes output.
fn init_threads() -> Result<(), CliError> {
    match std::env::var("RUS_ADQC_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw
                .trim()
                .parse()
                .map_err(|_| err(format!("RUS_ADQC_THREADS must be a positive integer, got `{raw}`")))?;
            if n == 0 {
                return Err(err("RUS_ADQC_THREADS must be at least 1"));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| err(format!("could not size the thread pool: {e}")))
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Kraus(args) => run_kraus(args),
        Command::Synth1q(args) => run_synth1q(args),
        Command::Synth2q(args) => run_synth2q(args),
        Command::Simulate(args) => run_simulate(args),
        Command::HittingStats(args) => run_stats(args),
        Command::Version => {
            println!("rus-adqc {}", env!("CARGO_PKG_VERSION"));
            Ok(Outcome::Clean)
        }
    }
}

fn emit(bytes: &[u8], output: Option<&Path>) -> Result<(), CliError> {
    match output {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
        Some(path) => Ok(fs::write(path, bytes)?),
    }
}

fn require_strength(alpha: f64) -> Result<f64, CliError> {
    if alpha.is_finite() && alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2 {
        Ok(alpha)
    } else {
        Err(err(format!(
            "coupling strength must lie strictly inside (0, pi/2), got {alpha}"
        )))
    }
}

fn require_finite(name: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(err(format!("{name} must be finite, got {value}")))
    }
}

/// A target names a built-in gate (possibly a `*`-product) unless the string
/// is a path to an existing file, in which case the file must hold a JSON
/// matrix.  Either way the result is checked for unitarity.
fn resolve_target(spec: &str) -> Result<SquareOperator, CliError> {
    let path = Path::new(spec);
    let gate = if path.is_file() {
        let text = fs::read_to_string(path)?;
        let matrix: SquareOperator = serde_json::from_str(&text)
            .map_err(|e| err(format!("could not read a matrix from `{spec}`: {e}")))?;
        GateRef::Matrix(matrix)
    } else {
        GateRef::Name(spec.to_string())
    };
    Ok(gate.resolve()?)
}

// ---------------------------------------------------------------- kraus

#[derive(Serialize)]
struct KrausConfig {
    alpha: f64,
    qubits: u8,
    flavor: &'static str,
}

#[derive(Serialize)]
struct KrausResult {
    interaction: SquareOperator,
    branches: Vec<KrausBranch>,
    probability_sum: f64,
    back_action: BackActionReport,
}

fn run_kraus(args: KrausArgs) -> Result<Outcome, CliError> {
    let alpha = require_strength(args.alpha)?;
    let flavor = args.flavor.core();
    let spec = match args.qubits {
        1 => ChannelSpec::single_qubit(flavor, alpha),
        2 => ChannelSpec::two_qubit(flavor, alpha),
        other => return Err(err(format!("--qubits must be 1 or 2, got {other}"))),
    };
    let branches = spec.kraus_branches()?;
    let probability_sum = branches.iter().map(|b| b.probability).sum();
    let result = KrausResult {
        interaction: spec.interaction_unitary()?,
        branches,
        probability_sum,
        back_action: spec.back_action()?,
    };
    let config = KrausConfig {
        alpha,
        qubits: args.qubits,
        flavor: flavor.name(),
    };
    let envelope = Envelope::new("kraus", config, None, result);
    emit(&to_json(&envelope)?, args.output.as_deref())?;
    Ok(Outcome::Clean)
}

// -------------------------------------------------------------- synth1q

#[derive(Serialize)]
struct Synth1qConfig {
    target: String,
    alpha: f64,
    flavor: &'static str,
    epsilon: f64,
    cap: usize,
    trials: usize,
    pauli_tolerant: bool,
    seed: u64,
    format: &'static str,
}

#[derive(Serialize)]
#[serde(untagged)]
enum WalkResult {
    Single {
        target_matrix: SquareOperator,
        trajectory: WalkTrajectory,
    },
    Many {
        target_matrix: SquareOperator,
        records: Vec<TrialRecord>,
        summary: HittingSummary,
    },
}

fn run_synth1q(args: Synth1qArgs) -> Result<Outcome, CliError> {
    let alpha = require_strength(args.alpha)?;
    require_finite("--epsilon", args.epsilon)?;
    let flavor = args.flavor.core();
    let gens = Generators::for_flavor(flavor, alpha)?;
    let target_matrix = resolve_target(&args.target)?;
    let mut spec = SynthTarget::new(target_matrix.clone(), args.epsilon)?.with_cap(args.cap)?;
    if args.pauli_tolerant {
        spec = spec.with_pauli_tolerance();
    }

    let config = Synth1qConfig {
        target: args.target.clone(),
        alpha,
        flavor: flavor.name(),
        epsilon: args.epsilon,
        cap: args.cap,
        trials: args.trials,
        pauli_tolerant: args.pauli_tolerant,
        seed: args.seed,
        format: args.format.name(),
    };

    let (result, rows, summary, capped) = if args.trials == 1 {
        let trajectory = run_until(&gens, &spec, args.seed)?;
        let capped = trajectory.stop_step.is_none();
        let rows = vec![CsvRow {
            trial: 0,
            stop_step: trajectory.stop_step,
            final_distance: trajectory.final_distance,
        }];
        let result = WalkResult::Single {
            target_matrix,
            trajectory,
        };
        (result, rows, None, capped)
    } else {
        let stats = hitting_stats(&gens, &spec, args.seed, args.trials)?;
        let capped = stats.summary.failures > 0;
        let rows = stats
            .records
            .iter()
            .map(|r| CsvRow {
                trial: r.trial,
                stop_step: r.stop_step,
                final_distance: r.final_distance,
            })
            .collect();
        let summary = stats.summary.clone();
        let result = WalkResult::Many {
            target_matrix,
            records: stats.records,
            summary: stats.summary,
        };
        (result, rows, Some(summary), capped)
    };

    emit_walk(
        "synth1q",
        &config,
        args.seed,
        args.format,
        result,
        &rows,
        summary.as_ref(),
        args.output.as_deref(),
    )?;
    Ok(if capped { Outcome::CapReached } else { Outcome::Clean })
}

#[allow(clippy::too_many_arguments)]
fn emit_walk<C: Serialize, R: Serialize>(
    command: &'static str,
    config: &C,
    seed: u64,
    format: FormatArg,
    result: R,
    rows: &[CsvRow],
    summary: Option<&HittingSummary>,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let bytes = match format {
        FormatArg::Json => to_json(&Envelope::new(command, config, Some(seed), result))?,
        FormatArg::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, command, &to_json(config)?, seed, summary, rows)?;
            buf
        }
    };
    emit(&bytes, output)
}

// -------------------------------------------------------------- synth2q

#[derive(Serialize)]
struct Synth2qConfig {
    alpha: f64,
    target_beta: f64,
    epsilon: f64,
    cap: usize,
    trials: usize,
    exact: Option<String>,
    seed: u64,
    format: &'static str,
}

#[derive(Serialize)]
#[serde(untagged)]
enum BetaResult {
    Single {
        params: BetaWalkParams,
        exact: Option<ExactReachability>,
        witness: Option<ResidueWitness>,
        trajectory: BetaTrajectory,
    },
    Many {
        params: BetaWalkParams,
        exact: Option<ExactReachability>,
        witness: Option<ResidueWitness>,
        records: Vec<TrialRecord>,
        summary: HittingSummary,
    },
}

fn parse_rational(raw: &str) -> Result<(i64, u64), CliError> {
    let (p, q) = raw
        .split_once('/')
        .ok_or_else(|| err(format!("--exact expects the form p/q, got `{raw}`")))?;
    let p: i64 = p
        .trim()
        .parse()
        .map_err(|_| err(format!("--exact numerator `{p}` is not an integer")))?;
    let q: u64 = q
        .trim()
        .parse()
        .map_err(|_| err(format!("--exact denominator `{q}` is not a positive integer")))?;
    Ok((p, q))
}

fn run_synth2q(args: Synth2qArgs) -> Result<Outcome, CliError> {
    let flag = args.exact.as_deref().map(parse_rational).transpose()?;
    let alpha = require_strength(args.alpha.unwrap_or(if flag.is_some() {
        exact_grid_strength()
    } else {
        DEFAULT_ALPHA
    }))?;
    let epsilon = args.epsilon.unwrap_or(if flag.is_some() { 1e-9 } else { 0.01 });
    require_finite("--epsilon", epsilon)?;
    require_finite("--target-beta", args.target_beta)?;

    let params = increments(alpha)?;
    let reachability = flag.map(|f| exact_reachable_set(&params, f)).transpose()?;
    let witness = reachability.as_ref().and_then(|reach| {
        reach.residues.as_ref().and_then(|rs| {
            rs.iter()
                .filter(|r| beta_distance(r.beta, args.target_beta) <= epsilon)
                .min_by(|a, b| {
                    beta_distance(a.beta, args.target_beta)
                        .total_cmp(&beta_distance(b.beta, args.target_beta))
                })
                .cloned()
        })
    });
    if let Some(reach) = &reachability {
        if reach.residues.is_some() && witness.is_none() {
            return Err(err(format!(
                "target {} is not within {epsilon} of any of the {} reachable \
                 angles (multiples of pi/{})",
                args.target_beta, reach.reachable_count, reach.lattice
            )));
        }
    }

    let config = Synth2qConfig {
        alpha,
        target_beta: args.target_beta,
        epsilon,
        cap: args.cap,
        trials: args.trials,
        exact: args.exact.clone(),
        seed: args.seed,
        format: args.format.name(),
    };

    let (result, rows, summary, capped) = if args.trials == 1 {
        let trajectory = run_until_beta(&params, args.target_beta, epsilon, args.cap, args.seed)?;
        let capped = trajectory.stop_step.is_none();
        let rows = vec![CsvRow {
            trial: 0,
            stop_step: trajectory.stop_step,
            final_distance: trajectory.final_distance,
        }];
        let result = BetaResult::Single {
            params,
            exact: reachability,
            witness,
            trajectory,
        };
        (result, rows, None, capped)
    } else {
        let stats = beta_hitting_stats(
            &params,
            args.target_beta,
            epsilon,
            args.cap,
            args.seed,
            args.trials,
        )?;
        let capped = stats.summary.failures > 0;
        let rows = stats
            .records
            .iter()
            .map(|r| CsvRow {
                trial: r.trial,
                stop_step: r.stop_step,
                final_distance: r.final_distance,
            })
            .collect();
        let summary = stats.summary.clone();
        let result = BetaResult::Many {
            params,
            exact: reachability,
            witness,
            records: stats.records,
            summary: stats.summary,
        };
        (result, rows, Some(summary), capped)
    };

    emit_walk(
        "synth2q",
        &config,
        args.seed,
        args.format,
        result,
        &rows,
        summary.as_ref(),
        args.output.as_deref(),
    )?;
    Ok(if capped { Outcome::CapReached } else { Outcome::Clean })
}

// ------------------------------------------------------------- simulate

#[derive(Serialize)]
struct SimulateConfig {
    source: String,
    epsilon: f64,
    program: Program,
}

fn run_simulate(args: SimulateArgs) -> Result<Outcome, CliError> {
    require_finite("--epsilon", args.epsilon)?;
    let (source, program) = match (&args.program, args.demo) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| err(format!("could not read `{}`: {e}", path.display())))?;
            let mut program: Program = serde_json::from_str(&text)
                .map_err(|e| err(format!("`{}` is not a program: {e}", path.display())))?;
            program.master_seed = args.seed;
            (format!("file:{}", path.display()), program)
        }
        (None, Some(DemoArg::Bell)) => (
            "demo:bell".into(),
            bell_demo_program(args.seed, args.epsilon),
        ),
        (None, Some(DemoArg::Asymmetric)) => (
            "demo:asymmetric".into(),
            asymmetric_demo_program(args.seed, false),
        ),
        (None, Some(DemoArg::AsymmetricExact)) => (
            "demo:asymmetric-exact".into(),
            asymmetric_demo_program(args.seed, true),
        ),
        // clap's conflicts_with / required_unless_present rule this out
        _ => return Err(err("give exactly one of --program or --demo")),
    };
    program.validate()?;

    let log: RunLog = run_program(&program)?;
    let aborted = log.aborted_at.is_some();
    let config = SimulateConfig {
        source,
        epsilon: args.epsilon,
        program,
    };
    let envelope = Envelope::new("simulate", config, Some(args.seed), log);
    emit(&to_json(&envelope)?, args.output.as_deref())?;
    Ok(if aborted { Outcome::CapReached } else { Outcome::Clean })
}

// --------------------------------------------------------- hitting-stats

#[derive(Serialize)]
struct StatsConfig {
    target: Option<String>,
    target_beta: Option<f64>,
    alpha: f64,
    flavor: Option<&'static str>,
    epsilon: f64,
    cap: usize,
    trials: usize,
    pauli_tolerant: bool,
    seed: u64,
    format: &'static str,
}

#[derive(Serialize)]
struct StatsResult {
    records: Vec<TrialRecord>,
    summary: HittingSummary,
}

fn run_stats(args: StatsArgs) -> Result<Outcome, CliError> {
    let alpha = require_strength(args.alpha)?;
    require_finite("--epsilon", args.epsilon)?;

    let stats = match (&args.target, args.target_beta) {
        (Some(target), None) => {
            let flavor = args.flavor.unwrap_or(FlavorArg::Full).core();
            let gens = Generators::for_flavor(flavor, alpha)?;
            let matrix = resolve_target(target)?;
            let mut spec = SynthTarget::new(matrix, args.epsilon)?.with_cap(args.cap)?;
            if args.pauli_tolerant {
                spec = spec.with_pauli_tolerance();
            }
            hitting_stats(&gens, &spec, args.seed, args.trials)?
        }
        (None, Some(target_beta)) => {
            require_finite("--target-beta", target_beta)?;
            if args.pauli_tolerant {
                return Err(err("--pauli-tolerant does not apply to the phase walk"));
            }
            if args.flavor.is_some() {
                return Err(err("--flavor does not apply to the phase walk"));
            }
            let params = increments(alpha)?;
            beta_hitting_stats(
                &params,
                target_beta,
                args.epsilon,
                args.cap,
                args.seed,
                args.trials,
            )?
        }
        // clap's conflicts_with / required_unless_present rule this out
        _ => return Err(err("give exactly one of --target or --target-beta")),
    };

    let config = StatsConfig {
        target: args.target.clone(),
        target_beta: args.target_beta,
        alpha,
        flavor: args
            .target
            .is_some()
            .then(|| args.flavor.unwrap_or(FlavorArg::Full).core().name()),
        epsilon: args.epsilon,
        cap: args.cap,
        trials: args.trials,
        pauli_tolerant: args.pauli_tolerant,
        seed: args.seed,
        format: args.format.name(),
    };

    // a capped trial is a data point here, not a failure of the command;
    // only an estimate built on zero successes reports the cap in its status
    let starved = stats.summary.successes == 0;
    let rows: Vec<CsvRow> = stats
        .records
        .iter()
        .map(|r| CsvRow {
            trial: r.trial,
            stop_step: r.stop_step,
            final_distance: r.final_distance,
        })
        .collect();
    let summary = stats.summary.clone();
    let result = StatsResult {
        records: stats.records,
        summary: stats.summary,
    };
    emit_walk(
        "hitting-stats",
        &config,
        args.seed,
        args.format,
        result,
        &rows,
        Some(&summary),
        args.output.as_deref(),
    )?;
    Ok(if starved { Outcome::CapReached } else { Outcome::Clean })
}
