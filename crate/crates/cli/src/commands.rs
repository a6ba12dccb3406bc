//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};

use schedmatch::analysis::{
    classify, classify_sampled, enumerate_stable, is_stable, Budget, StabilityMethod, CLASSIFY_EXHAUSTIVE_CAP,
};
use schedmatch::solver::{solve, SolveOptions, Style};
use schedmatch::{ChoiceFunction, Side};

use crate::corpus;
use crate::error::{CliError, Result};
use crate::problem::{parse_problem, Problem};
use crate::render;

#[derive(Parser, Debug)]
#[command(name = "schedmatch", version, about = "Stable sets of contracts for two-sided schedule markets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the worker-optimal and/or firm-optimal stable set.
    Solve(SolveArgs),
    /// Check whether a given set of contracts is stable.
    Verify(VerifyArgs),
    /// Report the properties of one side's choice map.
    Classify(ClassifyArgs),
    /// List every stable set of a small problem.
    Enumerate(EnumerateArgs),
    /// Print the iterates of the fixed-point algorithm.
    Trace(TraceArgs),
}

#[derive(Args, Debug)]
pub struct InputArg {
    /// Problem file, or the name of a bundled problem.
    #[arg(long, short)]
    pub input: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideChoice {
    Worker,
    Firm,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Worker,
    Firm,
}

impl From<SideArg> for Side {
    fn from(side: SideArg) -> Side {
        match side {
            SideArg::Worker => Side::Worker,
            SideArg::Firm => Side::Firm,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    Pair,
    Alternating,
}

impl From<StyleArg> for Style {
    fn from(style: StyleArg) -> Style {
        match style {
            StyleArg::Pair => Style::Pair,
            StyleArg::Alternating => Style::Alternating,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Definitional,
    Consistent,
    Revealing,
}

impl From<MethodArg> for StabilityMethod {
    fn from(method: MethodArg) -> StabilityMethod {
        match method {
            MethodArg::Definitional => StabilityMethod::Definitional,
            MethodArg::Consistent => StabilityMethod::ConsistentWitness,
            MethodArg::Revealing => StabilityMethod::RevealingFast,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceFormat {
    Table,
    Csv,
    Json,
}

fn parse_budget(text: &str) -> std::result::Result<Budget, String> {
    match text.split_once(':') {
        None if text == "exhaustive" => Ok(Budget::Exhaustive),
        None if text == "sampled" => Ok(Budget::Sampled(DEFAULT_SAMPLES)),
        Some(("sampled", n)) => match n.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Budget::Sampled(n)),
            _ => Err(format!("sample count must be a positive integer, got {n:?}")),
        },
        _ => Err(format!("expected exhaustive or sampled:N, got {text:?}")),
    }
}

const DEFAULT_SAMPLES: usize = 4000;
const DEFAULT_SEED: u64 = 1;

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, value_enum, default_value = "both")]
    pub side: SideChoice,
    #[arg(long, value_enum, default_value = "alternating")]
    pub style: StyleArg,
    /// Classify both maps first and report whether stability is guaranteed.
    #[arg(long)]
    pub check_revealing: bool,
    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// File with the candidate set: a JSON array of labels or whitespace-separated labels.
    #[arg(long)]
    pub set: String,
    /// Defaults to revealing when both maps are known to be revealing, else definitional.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Exit with status 2 when the set is not stable.
    #[arg(long)]
    pub expect_stable: bool,
    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, value_enum)]
    pub map: SideArg,
    /// exhaustive, or sampled:N for N random pairs.
    #[arg(long, value_parser = parse_budget, default_value = "exhaustive")]
    pub budget: Budget,
    /// Random seed for sampled classification.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// Largest universe to enumerate (2^N candidate sets).
    #[arg(long, default_value_t = 20)]
    pub cap: usize,
    /// Defaults to revealing when both maps are known to be revealing, else definitional.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, value_enum, default_value = "worker")]
    pub side: SideArg,
    #[arg(long, value_enum, default_value = "alternating")]
    pub style: StyleArg,
    #[arg(long, value_enum, default_value = "table")]
    pub format: TraceFormat,
}

/// Load `--input`: an existing file, else a bundled problem name.
pub fn load_problem(input: &str) -> Result<Problem> {
    let text = if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|source| CliError::Io { path: input.to_string(), source })?
    } else if let Some(text) = corpus::bundled(input) {
        text.to_string()
    } else {
        let known: Vec<&str> = corpus::names().collect();
        return Err(CliError::Usage(format!(
            "no such file or bundled problem: {input} (bundled: {})",
            known.join(", ")
        )));
    };
    parse_problem(&text).map_err(|e| match e {
        CliError::Syntax(m) => CliError::Syntax(format!("{input}: {m}")),
        CliError::Invalid { path, message } => CliError::Invalid { path: format!("{input}: {path}"), message },
        e => e,
    })
}

fn is_revealing(c: &ChoiceFunction) -> Result<bool> {
    if c.guarantee().is_revealing() {
        return Ok(true);
    }
    if c.universe().len() > CLASSIFY_EXHAUSTIVE_CAP {
        return Ok(false);
    }
    Ok(classify(c, Budget::Exhaustive)?.is_revealing.holds())
}

/// The fast check when it applies, the definition otherwise.
fn default_method(problem: &Problem) -> Result<StabilityMethod> {
    if is_revealing(&problem.worker_choice)? && is_revealing(&problem.firm_choice)? {
        Ok(StabilityMethod::RevealingFast)
    } else {
        Ok(StabilityMethod::Definitional)
    }
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("values always serialize");
    writeln!(out, "{text}").map_err(io_error)
}

fn io_error(source: std::io::Error) -> CliError {
    CliError::Io { path: "output".to_string(), source }
}

fn run_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<()> {
    let problem = load_problem(&args.input.input)?;
    let sides = match args.side {
        SideChoice::Worker => vec![Side::Worker],
        SideChoice::Firm => vec![Side::Firm],
        SideChoice::Both => vec![Side::Worker, Side::Firm],
    };
    let mut outcomes = Vec::new();
    for side in sides {
        let mut options = SolveOptions::new(side, args.style.into());
        if args.check_revealing {
            options = options.checked();
        }
        outcomes.push(solve(&problem.worker_choice, &problem.firm_choice, options)?);
    }
    match args.format {
        OutputFormat::Table => {
            let texts: Vec<String> = outcomes.iter().map(|o| render::outcome_text(&problem, o)).collect();
            write!(out, "{}", texts.join("\n")).map_err(io_error)
        }
        OutputFormat::Json => {
            let mut value = serde_json::Map::new();
            for o in &outcomes {
                value.insert(o.side.name().to_string(), render::outcome_json(&problem, o));
            }
            print_json(out, &value.into())
        }
    }
}

fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<()> {
    let problem = load_problem(&args.input.input)?;
    let text = std::fs::read_to_string(&args.set).map_err(|source| CliError::Io { path: args.set.clone(), source })?;
    let set = problem.parse_set(&text, &args.set)?;
    let method = match args.method {
        Some(m) => m.into(),
        None => default_method(&problem)?,
    };
    let verdict = is_stable(&problem.worker_choice, &problem.firm_choice, &set, method)?;
    match args.format {
        OutputFormat::Table => write!(out, "{}", render::verdict_text(&problem, &set, &verdict)).map_err(io_error)?,
        OutputFormat::Json => print_json(out, &render::verdict_json(&problem, &set, &verdict))?,
    }
    if args.expect_stable && !verdict.is_stable() {
        return Err(CliError::VerifyFailed(format!("{set} is not stable")));
    }
    Ok(())
}

fn run_classify(args: &ClassifyArgs, out: &mut dyn Write) -> Result<()> {
    let problem = load_problem(&args.input.input)?;
    let side: Side = args.map.into();
    let c = problem.choice(side);
    let report = match args.budget {
        Budget::Exhaustive => classify(c, Budget::Exhaustive)?,
        Budget::Sampled(n) => classify_sampled(c, n, args.seed)?,
    };
    match args.format {
        OutputFormat::Table => write!(out, "{}", render::report_text(side, &report)).map_err(io_error),
        OutputFormat::Json => print_json(out, &render::report_json(side, &report)),
    }
}

fn run_enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> Result<()> {
    let problem = load_problem(&args.input.input)?;
    let size = problem.universe.len();
    if size > args.cap {
        return Err(schedmatch::Error::CapExceeded {
            operation: "enumerate",
            size,
            cap: args.cap,
            hint: " (raise --cap to allow more)",
        }
        .into());
    }
    let method = match args.method {
        Some(m) => m.into(),
        None => default_method(&problem)?,
    };
    let sets = enumerate_stable(&problem.worker_choice, &problem.firm_choice, method)?;
    match args.format {
        OutputFormat::Table => {
            write!(out, "{}", render::stable_sets_text(&problem, &sets, method.name())).map_err(io_error)
        }
        OutputFormat::Json => print_json(out, &render::stable_sets_json(&sets, method.name())),
    }
}

fn run_trace(args: &TraceArgs, out: &mut dyn Write) -> Result<()> {
    let problem = load_problem(&args.input.input)?;
    let options = SolveOptions::new(args.side.into(), args.style.into());
    let outcome = solve(&problem.worker_choice, &problem.firm_choice, options)?;
    let text = match args.format {
        TraceFormat::Table => render::trace_table(&problem, &outcome),
        TraceFormat::Csv => render::trace_csv(&problem, &outcome),
        TraceFormat::Json => return print_json(out, &render::outcome_json(&problem, &outcome)),
    };
    write!(out, "{text}").map_err(io_error)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Solve(args) => run_solve(args, out),
        Command::Verify(args) => run_verify(args, out),
        Command::Classify(args) => run_classify(args, out),
        Command::Enumerate(args) => run_enumerate(args, out),
        Command::Trace(args) => run_trace(args, out),
    }
}

/// Run a command line and return the exit status: 0 success, 1 usage or
/// parse error, 2 verification failed, 3 cap exceeded.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
