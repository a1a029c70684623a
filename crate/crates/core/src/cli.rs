//! Command-line driver behind the `freaco` binary.
//!
//! Results go to stdout as JSON or CSV; diagnostics go to stderr. Exit codes:
//! 0 success, 1 usage, I/O or parse errors, 2 infeasible system, 3 path space above
//! the enumeration cap.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::aco::{run, SolverConfig};
use crate::bench::{export_all, run_experiment, write_summary_csv, ExperimentSpec};
use crate::error::{ConfigError, Error, FreError};
use crate::fre::Cell;
use crate::objective::{builtin_problem, builtin_problems, Problem, BUILTIN_COUNT};
use crate::oracle::{self, PathIter};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "freaco",
    version,
    about = "Ant colony search over max-min fuzzy relational equation constraints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the solver once and print the best solution.
    Solve(SolveArgs),
    /// Repeat seeded runs over builtin problems and write summary statistics.
    Bench(BenchArgs),
    /// Search every cell exhaustively and print a reference optimum.
    Verify(VerifyArgs),
    /// Print the maximum solution, candidate sets, |E| and some candidate solutions.
    Enumerate(EnumerateArgs),
    /// List the builtin problems.
    Problems,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Problem JSON file with "A", "b", "objective" and optionally "name", "known_optimum".
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Builtin problem index, 1 to 10.
    #[arg(long)]
    pub builtin: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
    #[arg(long, default_value_t = 50)]
    pub pop: usize,
    #[arg(long, default_value_t = 0.0125)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0)]
    pub xi: f64,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.0)]
    pub deposit: f64,
    /// Gaussian samples per iteration after the first; 0 disables sampling.
    #[arg(long, default_value_t = 2)]
    pub samples_per_iter: usize,
    /// Write the best-so-far trace as CSV (iter,best_so_far).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write the full run result as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// `all` or a comma-separated list of builtin indices.
    #[arg(long, default_value = "all")]
    pub problems: String,
    #[arg(long, default_value_t = 30)]
    pub runs: usize,
    /// Base seed; run r uses seed + r.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
    #[arg(long, default_value_t = 2)]
    pub samples_per_iter: usize,
    /// Directory for summary.csv, summary.json and traces.csv. The summary CSV is always printed.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = oracle::DEFAULT_SAMPLES_PER_CELL)]
    pub samples: usize,
    #[arg(long, default_value_t = oracle::DEFAULT_REFINE_STEPS)]
    pub refine: usize,
    #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
    pub cap: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Number of (path, candidate) lines to print.
    #[arg(long, default_value_t = 10)]
    pub max: usize,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
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
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => report(&e, err),
    }
}

/// Entry point for the binary: honours `FREACO_THREADS` and uses the process streams.
pub fn main() -> i32 {
    if let Some(n) = std::env::var("FREACO_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn report(e: &Error, err: &mut dyn Write) -> i32 {
    let inner = match e {
        Error::Run { source, .. } => source.as_ref(),
        other => other,
    };
    let _ = writeln!(err, "error: {e}");
    match inner {
        Error::Fre(FreError::Infeasible { violated_rows, .. }) => {
            let _ = writeln!(err, "violated rows: {violated_rows:?}");
            EXIT_INFEASIBLE
        }
        Error::CapExceeded { size, .. } => {
            let _ = writeln!(err, "|E| = {size}");
            EXIT_CAP
        }
        _ => EXIT_USAGE,
    }
}

fn load(source: &Source) -> Result<Problem, Error> {
    match (&source.file, source.builtin) {
        (Some(path), _) => Problem::load(path),
        (None, Some(k)) => builtin(k),
        (None, None) => unreachable!("clap requires one source"),
    }
}

fn builtin(k: usize) -> Result<Problem, Error> {
    builtin_problem(k).ok_or_else(|| {
        ConfigError(format!("builtin index {k} is outside 1..={BUILTIN_COUNT}")).into()
    })
}

fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn emit(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), Error> {
    writeln!(out, "{value}").map_err(io_err(std::path::Path::new("<stdout>")))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), Error> {
    match cmd {
        Command::Solve(a) => solve(a, out),
        Command::Bench(a) => bench(a, out),
        Command::Verify(a) => {
            let problem = load(&a.source)?;
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let report = oracle::reference_optimum(&problem, a.samples, a.refine, a.cap, &mut rng)?;
            emit(
                out,
                &serde_json::to_value(report).expect("report serializes"),
            )
        }
        Command::Enumerate(a) => enumerate(a, out),
        Command::Problems => {
            for (k, p) in builtin_problems().iter().enumerate() {
                let res = p.instance.resolve()?;
                emit(
                    out,
                    &json!({
                        "index": k + 1,
                        "name": p.name,
                        "m": p.instance.m(),
                        "n": p.instance.n(),
                        "known_optimum": p.known_optimum,
                        "path_space_size": res.sets.path_space_size().to_string(),
                        "objective": p.objective.source(),
                    }),
                )?;
            }
            Ok(())
        }
    }
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> Result<(), Error> {
    let problem = load(&a.source)?;
    let config = SolverConfig {
        s_pop: a.pop,
        q: a.q,
        xi: a.xi,
        rho: a.rho,
        big_q: a.deposit,
        t_max: a.iters,
        seed: a.seed,
        samples_per_iteration: a.samples_per_iter,
    };
    let result = run(&problem, &config)?;
    if let Some(path) = &a.trace {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Format {
            path: path.clone(),
            message: e.to_string(),
        })?;
        let mut rows = vec![["iter".to_string(), "best_so_far".to_string()]];
        rows.extend(
            result
                .trace
                .iter()
                .enumerate()
                .map(|(t, f)| [(t + 1).to_string(), f.to_string()]),
        );
        for row in rows {
            w.write_record(row).map_err(|e| Error::Format {
                path: path.clone(),
                message: e.to_string(),
            })?;
        }
        w.flush().map_err(io_err(path))?;
    }
    if let Some(path) = &a.out {
        let text = serde_json::to_string_pretty(&result).expect("run result serializes");
        std::fs::write(path, text).map_err(io_err(path))?;
    }
    emit(
        out,
        &json!({
            "problem": problem.name,
            "best_f": result.best.f,
            "best_x": result.best.x,
            "best_path": result.best.path,
            "eval_count": result.eval_count,
            "seed": result.seed,
        }),
    )
}

fn parse_selection(text: &str) -> Result<Vec<Problem>, Error> {
    if text.trim() == "all" {
        return Ok(builtin_problems());
    }
    text.split(',')
        .map(|s| {
            let k = s
                .trim()
                .parse::<usize>()
                .map_err(|_| ConfigError(format!("bad problem index `{s}`")))?;
            builtin(k)
        })
        .collect()
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<(), Error> {
    let spec = ExperimentSpec {
        problems: parse_selection(&a.problems)?,
        runs: a.runs,
        config: SolverConfig {
            t_max: a.iters,
            samples_per_iteration: a.samples_per_iter,
            ..SolverConfig::default()
        },
        base_seed: a.seed,
    };
    let summary = run_experiment(&spec)?;
    if let Some(dir) = &a.out {
        export_all(&summary, dir)?;
    }
    write_summary_csv(&summary, out).map_err(|e| Error::Format {
        path: "<stdout>".into(),
        message: e.to_string(),
    })
}

fn enumerate(a: EnumerateArgs, out: &mut dyn Write) -> Result<(), Error> {
    let problem = load(&a.source)?;
    let res = problem.instance.resolve()?;
    emit(
        out,
        &json!({
            "xbar": res.xbar.as_slice(),
            "sets": res.sets.to_one_based(),
            "path_space_size": res.sets.path_space_size().to_string(),
        }),
    )?;
    for path in PathIter::new(&res.sets).take(a.max) {
        let Cell { lower, .. } = res.cell(&path)?;
        emit(out, &json!({ "path": path, "candidate": lower }))?;
    }
    Ok(())
}
