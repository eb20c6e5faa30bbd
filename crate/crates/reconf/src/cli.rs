//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reconf_core::driver::{solve_bcr_observed, DriverError};
use reconf_core::encoder::{EncodeError, Encoder, EncoderOptions, GoalMode};
use reconf_core::model::{
    validate_sequence, BoundStatus, ConfigError, Hints, IsrpInstance, Mode, SearchConfig, SolveOutcome, Status,
    StepStats, StopOn,
};
use reconf_core::oracle::{self, OracleError};
use reconf_core::sat::Cnf;
use thiserror::Error;

use crate::formats::{
    parse_col_dat, parse_facts, parse_solution, write_dimacs_cnf, write_reconfig_graph, write_solution,
    write_var_map, ParseError,
};
use crate::StdClock;

pub const EXIT_REACHABLE: i32 = 10;
pub const EXIT_UNREACHABLE: i32 = 20;
pub const EXIT_UNKNOWN: i32 = 30;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "reconf", version, about = "Bounded reconfiguration solver for independent sets under token jumping")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a reconfiguration sequence.
    Solve(SolveArgs),
    /// Answer by explicit state-space search.
    Oracle(OracleArgs),
    /// Check a solution file against an instance.
    Validate(ValidateArgs),
    /// Write the one-shot formula for a fixed length in DIMACS CNF.
    DumpCnf(DumpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Facts,
    Col,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Instance file (`.lp`/`.asp` facts or `.col` DIMACS graph).
    pub input: PathBuf,
    /// Start/goal file for `.col` input; defaults to the input with a `.dat` extension.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "shortest", value_parser = parse_from_str::<Mode>)]
    pub mode: Mode,
    /// Smallest bound at which the stop criterion is checked.
    #[arg(long, default_value_t = 1)]
    pub min: usize,
    /// Number of bounds to try (longest mode: largest length tried).
    #[arg(long)]
    pub max: Option<usize>,
    #[arg(long, default_value = "sat", value_parser = parse_from_str::<StopOn>)]
    pub stop: StopOn,
    /// `none`, `all`, or a comma list of d1,d2,t1,t2,h. Default depends on the mode.
    #[arg(long, value_parser = parse_from_str::<Hints>)]
    pub hints: Option<Hints>,
    /// Forbid repeated states (always on in longest mode).
    #[arg(long)]
    pub no_loop: bool,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Append solver counters as `c` lines.
    #[arg(long)]
    pub stats: bool,
    /// Report each bound on standard error.
    #[arg(short, long)]
    pub verbose: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Report a longest loop-free sequence instead of a shortest one.
    #[arg(long)]
    pub longest: bool,
    /// Maximum number of states to enumerate.
    #[arg(long, default_value_t = oracle::DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
    /// Node expansions allowed for the longest search.
    #[arg(long, default_value_t = oracle::DEFAULT_EXPANSION_BUDGET)]
    pub budget: u64,
    /// Also write the reconfiguration graph as an edge list.
    #[arg(long)]
    pub export_graph: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Solution file to check.
    pub solution: PathBuf,
    /// Also require all states to be distinct.
    #[arg(long)]
    pub simple: bool,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Sequence length encoded.
    #[arg(long)]
    pub bound: usize,
    #[arg(long, default_value = "all", value_parser = parse_from_str::<Hints>)]
    pub hints: Hints,
    #[arg(long)]
    pub no_loop: bool,
    /// Also write `atom index` lines for every variable.
    #[arg(long)]
    pub var_map: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn parse_from_str<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, String> {
    s.parse()
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Driver(#[from] DriverError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn infer_format(path: &Path) -> Option<Format> {
    match path.extension()?.to_str()? {
        "lp" | "asp" => Some(Format::Facts),
        "col" => Some(Format::Col),
        _ => None,
    }
}

pub fn load_instance(args: &InputArgs) -> Result<IsrpInstance, CliError> {
    let format = args.format.or_else(|| infer_format(&args.input)).ok_or_else(|| {
        CliError::Usage(format!(
            "{}: cannot infer the format from the extension; pass --format",
            args.input.display()
        ))
    })?;
    let text = read(&args.input)?;
    match format {
        Format::Facts => parse_facts(&text).map_err(|source| CliError::Parse {
            path: args.input.clone(),
            source,
        }),
        Format::Col => {
            let pairs = args.pairs.clone().unwrap_or_else(|| args.input.with_extension("dat"));
            let pair_text = read(&pairs)?;
            parse_col_dat(&text, &pair_text).map_err(|source| {
                let path = if source.message.starts_with("graph:") { args.input.clone() } else { pairs };
                CliError::Parse { path, source }
            })
        }
    }
}

fn emit(output: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Reachable => EXIT_REACHABLE,
        Status::Unreachable => EXIT_UNREACHABLE,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

pub fn search_config(args: &SolveArgs) -> Result<SearchConfig, CliError> {
    let mut config = SearchConfig::new(args.mode);
    config.min_steps = Some(args.min);
    config.max_steps = args.max;
    config.stop = args.stop;
    if let Some(hints) = args.hints {
        config.hints = hints;
    }
    config.no_loop |= args.no_loop;
    config.seed = args.seed;
    if let Some(secs) = args.timeout {
        let t = Duration::try_from_secs_f64(secs)
            .map_err(|_| CliError::Usage(format!("invalid timeout {secs}")))?;
        config.timeout = Some(t);
    }
    config.validate()?;
    Ok(config)
}

fn bound_status_name(s: BoundStatus) -> &'static str {
    match s {
        BoundStatus::Sat => "SAT",
        BoundStatus::Unsat => "UNSAT",
        BoundStatus::Interrupted => "INTERRUPTED",
    }
}

/// Deterministic counters only; timings go to the progress stream.
fn stat_lines(outcome: &SolveOutcome) -> Vec<(String, String)> {
    let sum = |f: fn(&StepStats) -> u64| outcome.stats.iter().map(f).sum::<u64>().to_string();
    let mut lines = vec![("bounds".to_string(), outcome.stats.len().to_string())];
    if let Some(b) = outcome.last_bound() {
        lines.push(("bound".into(), b.to_string()));
    }
    if let Some(seq) = &outcome.sequence {
        lines.push(("length".into(), seq.len().to_string()));
    }
    lines.push(("decisions".into(), sum(|s| s.decisions)));
    lines.push(("conflicts".into(), sum(|s| s.conflicts)));
    lines.push(("propagations".into(), sum(|s| s.propagations)));
    lines
}

fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let config = search_config(args)?;
    let instance = load_instance(&args.input)?;
    let clock = StdClock::new();
    let verbose = args.verbose;
    let outcome = solve_bcr_observed(&instance, &config, &clock, &mut |s| {
        if verbose {
            let _ = writeln!(
                stderr,
                "c step bound={} status={} conflicts={} elapsed={:.3}s",
                s.bound,
                bound_status_name(s.status),
                s.conflicts,
                s.elapsed.as_secs_f64()
            );
        }
    })?;
    let mut extra = Vec::new();
    if args.stats {
        extra = stat_lines(&outcome);
    }
    if config.mode == Mode::Longest && outcome.sequence.is_some() && !outcome.complete {
        extra.push(("optimality".into(), "unproven".into()));
    }
    emit(args.output.as_deref(), stdout, &write_solution(&outcome, &extra))?;
    Ok(status_code(outcome.status))
}

fn cmd_oracle(args: &OracleArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let instance = load_instance(&args.input)?;
    let states = match oracle::enumerate_states(&instance, args.cap) {
        Ok(states) => states,
        Err(e) => return oracle_unknown(args, stdout, e),
    };
    let count = states.len();
    let graph = oracle::build_reconfig_graph(states);
    if let Some(path) = &args.export_graph {
        fs::write(path, write_reconfig_graph(&graph)).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    let found = if args.longest {
        oracle::longest_in(&instance, &graph, args.budget)
    } else {
        oracle::bfs_in(&instance, &graph)
    };
    let found = match found {
        Ok(found) => found,
        Err(e) => return oracle_unknown(args, stdout, e),
    };
    let outcome = SolveOutcome {
        status: if found.is_some() { Status::Reachable } else { Status::Unreachable },
        sequence: found.map(|(_, seq)| seq),
        stats: Vec::new(),
        complete: true,
    };
    let stats = [
        ("states".to_string(), count.to_string()),
        ("edges".to_string(), graph.edge_count().to_string()),
    ];
    emit(args.output.as_deref(), stdout, &write_solution(&outcome, &stats))?;
    Ok(status_code(outcome.status))
}

fn oracle_unknown(args: &OracleArgs, stdout: &mut dyn Write, e: OracleError) -> Result<i32, CliError> {
    let text = write_solution(&SolveOutcome::unknown(), &[("limit".into(), e.to_string().replace(' ', "_"))]);
    emit(args.output.as_deref(), stdout, &text)?;
    Ok(EXIT_UNKNOWN)
}

fn cmd_validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let instance = load_instance(&args.input)?;
    let text = read(&args.solution)?;
    let parsed = parse_solution(&text).map_err(|source| CliError::Parse {
        path: args.solution.clone(),
        source,
    })?;
    let Some(seq) = parsed.sequence else {
        let _ = writeln!(stdout, "no sequence to check (status {})", parsed.status);
        return Ok(0);
    };
    let report = validate_sequence(&instance, &seq, args.simple);
    let out = if report.is_ok() {
        format!("valid: length {}\n", seq.len())
    } else {
        let mut s = format!("invalid: {} violation(s)\n", report.violations.len());
        for v in &report.violations {
            s.push_str(&format!("  {v}\n"));
        }
        s
    };
    stdout.write_all(out.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })?;
    Ok(if report.is_ok() { 0 } else { EXIT_INVALID })
}

fn cmd_dump(args: &DumpArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let instance = load_instance(&args.input)?;
    let options = EncoderOptions {
        hints: args.hints,
        no_loop: args.no_loop,
    };
    let mut enc = Encoder::with_goal_mode(Cnf::default(), instance, options, GoalMode::Fixed(args.bound));
    enc.encode_through(args.bound)?;
    if let Some(path) = &args.var_map {
        fs::write(path, write_var_map(&enc.named_atoms())).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    let cnf = enc.into_sink();
    emit(args.output.as_deref(), stdout, &write_dimacs_cnf(&cnf))?;
    Ok(0)
}

/// Runs one command and returns the process exit code. Errors are reported
/// on `stderr` with code 2.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, stdout, stderr),
        Command::Oracle(a) => cmd_oracle(a, stdout),
        Command::Validate(a) => cmd_validate(a, stdout),
        Command::DumpCnf(a) => cmd_dump(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
