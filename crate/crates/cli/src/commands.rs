use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use powsums::planner::{
    format_factors, search_factors, search_factors_in, validate_chain, Chain, FactorCandidate,
};
use powsums::solver::{
    bit_count_table, format_solution, format_solution_line, parse_checkpoint, parse_solution_line,
    resume_chain, solve_chain_with, write_checkpoint, ChainRun, Checkpoint, Direction,
    ExactSolution, ProblemSpec, SolveOptions, DEFAULT_MEMORY_CAP,
};
use powsums::Error;

use crate::chainfile::ChainFile;
use crate::tables::{bundled_chain, BIT_COUNTS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_PARSE: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => exit_code(e),
            CliError::Io { .. } => EXIT_PARSE,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ChainExhausted { .. } => EXIT_EXHAUSTED,
        Error::MemoryBudgetExceeded { .. }
        | Error::StepModulusTooLarge(_)
        | Error::BaseModulusTooLarge { .. }
        | Error::SubgroupTooLarge(_)
        | Error::FactorizationNeeded { .. }
        | Error::ExponentOverflow(_)
        | Error::PrimePowerTooLarge { .. } => EXIT_RESOURCE,
        Error::Parse { .. } => EXIT_PARSE,
        _ => EXIT_MISMATCH,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "powsums",
    version,
    about = "Powers of 3 as sums of distinct powers of 2, and back, by modulus chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find every solution for one n along a chain of moduli.
    Solve(SolveArgs),
    /// Print bit lengths and popcounts of 3^x and check them against the reference values.
    VerifyTable1 {
        #[arg(default_value_t = 25)]
        x_max: u32,
    },
    /// Report which known solutions can produce extraneous solutions modulo a chain's final modulus.
    Validate {
        /// Chain file.
        chain: PathBuf,
        /// Solution lines as written by `solve --format lines`.
        solutions: PathBuf,
    },
    /// List primes p = 1 + k 2^a 3^b with the orders of 2 and 3 modulo p.
    Plan(PlanArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Lines,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, default_value = "3=sum2")]
    pub direction: Direction,
    #[arg(long)]
    pub n: usize,
    /// Chain file; defaults to the bundled chain for the direction.
    #[arg(long)]
    pub chain: Option<PathBuf>,
    #[arg(long, env = "POWSUMS_WORKERS")]
    pub workers: Option<usize>,
    /// Per-side entry cap for meet-in-the-middle lists.
    #[arg(long, default_value_t = DEFAULT_MEMORY_CAP)]
    pub memory_cap: usize,
    /// Keep lifting solutions whose summands are already determinate.
    #[arg(long)]
    pub no_early_finalize: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Rewrite this file with the working set after every chain index.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue from a checkpoint file.
    #[arg(long)]
    pub resume: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, default_value_t = 0)]
    pub two_val: u32,
    #[arg(long, default_value_t = 0)]
    pub three_val: u32,
    #[arg(
        long,
        conflicts_with = "candidates",
        required_unless_present = "candidates"
    )]
    pub p_max: Option<u64>,
    /// Comma-separated candidates to test instead of sieving.
    #[arg(long, value_delimiter = ',')]
    pub candidates: Option<Vec<u64>>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out, err),
        Command::VerifyTable1 { x_max } => cmd_verify_table1(x_max, out),
        Command::Validate { chain, solutions } => cmd_validate(&chain, &solutions, out),
        Command::Plan(a) => cmd_plan(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn io_out(e: io::Error) -> CliError {
    CliError::Io {
        path: "<output>".into(),
        source: e,
    }
}

pub fn load_chain(path: Option<&Path>, direction: Direction) -> Result<Chain, CliError> {
    match path {
        None => Ok(bundled_chain(direction)?),
        Some(p) => Ok(ChainFile::parse(&read(p)?)?.to_chain(Some(direction))?),
    }
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let spec = ProblemSpec::new(a.direction, a.n)?;
    let chain = load_chain(a.chain.as_deref(), a.direction)?;
    let opts = SolveOptions {
        workers: a.workers,
        memory_cap: a.memory_cap,
        early_finalize: !a.no_early_finalize,
        ..SolveOptions::default()
    };
    let mut checkpoint_err = None;
    let mut observer = |r: &powsums::solver::StepReport,
                        left: &[powsums::solver::SolutionModM],
                        found: &[ExactSolution]| {
        if let (Some(path), None) = (&a.checkpoint, &checkpoint_err) {
            let cp = Checkpoint {
                index: r.index,
                found: found.to_vec(),
                solutions: left.to_vec(),
            };
            if let Err(e) = write_atomic(path, &write_checkpoint(spec.direction, &cp)) {
                checkpoint_err = Some(e);
            }
        }
    };
    let result = match &a.resume {
        Some(p) => {
            let cp = parse_checkpoint(&read(p)?, &spec)?;
            resume_chain(&spec, &chain, cp, &opts, &mut observer)
        }
        None => solve_chain_with(&spec, &chain, &opts, &mut observer),
    };
    if let Some(e) = checkpoint_err {
        return Err(e);
    }
    match result {
        Ok(run) => {
            print_run(&run, chain.len(), a.format, out, err).map_err(io_out)?;
            Ok(EXIT_OK)
        }
        Err(Error::ChainExhausted {
            index,
            remaining,
            partial,
        }) => {
            print_run(&partial, chain.len(), a.format, out, err).map_err(io_out)?;
            writeln!(
                err,
                "error: chain exhausted at index {index} with {remaining} indeterminate solutions left; \
                 the solutions above may be incomplete"
            )
            .map_err(io_out)?;
            Ok(EXIT_EXHAUSTED)
        }
        Err(e) => Err(e.into()),
    }
}

fn print_run(
    run: &ChainRun,
    chain_len: usize,
    format: OutputFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<()> {
    let d = run.spec.direction;
    let report: &mut dyn Write = match format {
        OutputFormat::Text => {
            for s in &run.solutions {
                writeln!(out, "{}", format_solution(d, s))?;
            }
            writeln!(out, "solutions: {}", run.solutions.len())?;
            out
        }
        OutputFormat::Lines => {
            for s in &run.solutions {
                writeln!(out, "{}", format_solution_line(d, &s.x, &s.exponents))?;
            }
            err
        }
    };
    let r = &run.report;
    if r.parity_shortcut {
        writeln!(
            report,
            "odd n > 1: a sum of an odd number of powers of 3 is odd, so it is never a power of 2 above 1"
        )?;
        return Ok(());
    }
    match r.terminated_at {
        Some(i) => writeln!(report, "terminated at index {i} of {chain_len}")?,
        None => writeln!(
            report,
            "not terminated; {} solutions left",
            run.remaining.len()
        )?,
    }
    writeln!(
        report,
        "{:>5} {:>9} {:>9} {:>9} {:>10} {:>9} {:>8} {:>9} {:>9}",
        "step",
        "input",
        "produced",
        "balanced",
        "unbalanced",
        "finalized",
        "verified",
        "remaining",
        "seconds"
    )?;
    for s in &r.steps {
        writeln!(
            report,
            "{:>5} {:>9} {:>9} {:>9} {:>10} {:>9} {:>8} {:>9} {:>9.3}",
            s.index,
            s.input,
            s.produced,
            s.balanced,
            s.unbalanced,
            s.finalized,
            s.verified,
            s.remaining,
            s.elapsed.as_secs_f64()
        )?;
    }
    Ok(())
}

pub fn cmd_verify_table1(x_max: u32, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut bad = Vec::new();
    writeln!(out, "{:>4} {:>5} {:>5}", "x", "bits", "ones").map_err(io_out)?;
    for row in bit_count_table(x_max) {
        let mut mark = "";
        if let Some(&want) = BIT_COUNTS.get(row.x as usize) {
            if (row.bits, row.ones) != want {
                mark = "  MISMATCH";
                bad.push(row.x);
            }
        }
        writeln!(out, "{:>4} {:>5} {:>5}{mark}", row.x, row.bits, row.ones).map_err(io_out)?;
    }
    if bad.is_empty() {
        Ok(EXIT_OK)
    } else {
        Err(CliError::Mismatch(format!(
            "reference values differ at x = {bad:?}"
        )))
    }
}

/// Reads solution lines, skipping blanks and `#` comments.
pub fn parse_solutions(text: &str) -> Result<(Option<Direction>, Vec<ExactSolution>), CliError> {
    let mut direction = None;
    let mut sols = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (d, x, exps) = parse_solution_line(t, line_no)?;
        if direction.replace(d).is_some_and(|old| old != d) {
            return Err(Error::Parse {
                line: line_no,
                msg: "mixed directions".into(),
            }
            .into());
        }
        let x = u64::try_from(&x).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        sols.push(ExactSolution::checked(x, exps, d));
    }
    Ok((direction, sols))
}

pub fn cmd_validate(chain: &Path, solutions: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let (direction, sols) = parse_solutions(&read(solutions)?)?;
    let chain = ChainFile::parse(&read(chain)?)?.to_chain(direction)?;
    if let Some(s) = sols.iter().find(|s| !s.verified) {
        return Err(CliError::Mismatch(format!(
            "{} is not a solution",
            format_solution(chain.direction(), s)
        )));
    }
    let report = validate_chain(&chain, &sols);
    writeln!(out, "{report}").map_err(io_out)?;
    Ok(EXIT_OK)
}

pub fn cmd_plan(a: &PlanArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let found: Vec<FactorCandidate> = match (&a.candidates, a.p_max) {
        (Some(c), _) => search_factors_in(a.two_val, a.three_val, c)?,
        (None, Some(p_max)) => search_factors(a.two_val, a.three_val, p_max)?,
        (None, None) => unreachable!("clap requires one of the two"),
    };
    writeln!(out, "p | O_2(p) | O_3(p) | v_2(O_3(p))").map_err(io_out)?;
    for c in &found {
        let v2 = c
            .ord3_factors
            .iter()
            .find(|&&(q, _)| q == 2)
            .map_or(0, |&(_, e)| e);
        writeln!(
            out,
            "{} | {} | {} | {v2}",
            c.p,
            format_factors(&c.ord2_factors),
            format_factors(&c.ord3_factors)
        )
        .map_err(io_out)?;
    }
    Ok(EXIT_OK)
}
