//! Repeated seeded runs with summary statistics, error measures and trace export.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aco::{run, SolverConfig};
use crate::error::{ConfigError, Error, Result};
use crate::objective::Problem;

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub problems: Vec<Problem>,
    pub runs: usize,
    /// Shared by every run except for the seed, which is `base_seed + r`.
    pub config: SolverConfig,
    pub base_seed: u64,
}

impl ExperimentSpec {
    pub fn new(problems: Vec<Problem>) -> Self {
        ExperimentSpec {
            problems,
            runs: 30,
            config: SolverConfig::default(),
            base_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSummary {
    pub name: String,
    pub known_optimum: Option<f64>,
    pub avg_best: f64,
    pub median_best: f64,
    /// Sample standard deviation (divisor `runs − 1`); 0 for a single run.
    pub sd_best: f64,
    pub f_best: f64,
    pub f_worst: f64,
    pub mean_eval_count: f64,
    /// Mean of `best-so-far − known optimum` over every run and iteration.
    pub mean_error: Option<f64>,
    /// Final best value of each run, by run index.
    pub finals: Vec<f64>,
    /// Best-so-far per iteration, one row per run.
    pub traces: Vec<Vec<f64>>,
}

impl ProblemSummary {
    fn from_runs(
        problem: &Problem,
        finals: Vec<f64>,
        evals: &[usize],
        traces: Vec<Vec<f64>>,
    ) -> Self {
        let runs = finals.len();
        let mean_error = problem.known_optimum.map(|opt| {
            let total: usize = traces.iter().map(Vec::len).sum();
            traces.iter().flatten().map(|f| f - opt).sum::<f64>() / total as f64
        });
        ProblemSummary {
            name: problem.name.clone(),
            known_optimum: problem.known_optimum,
            avg_best: mean(&finals),
            median_best: median(&finals),
            sd_best: sample_sd(&finals),
            f_best: finals.iter().copied().fold(f64::INFINITY, f64::min),
            f_worst: finals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean_eval_count: evals.iter().sum::<usize>() as f64 / runs as f64,
            mean_error,
            finals,
            traces,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub runs: usize,
    pub base_seed: u64,
    pub config: SolverConfig,
    pub problems: Vec<ProblemSummary>,
    /// Mean of the squared per-problem errors, over problems with a known optimum.
    pub mse: Option<f64>,
}

/// Runs every problem `runs` times in parallel and aggregates by run index.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentSummary> {
    if spec.runs == 0 {
        return Err(ConfigError("runs must be at least 1".into()).into());
    }
    spec.config.validate()?;
    let jobs: Vec<(usize, usize)> = (0..spec.problems.len())
        .flat_map(|p| (0..spec.runs).map(move |r| (p, r)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(p, r)| {
            let cfg = SolverConfig {
                seed: spec.base_seed.wrapping_add(r as u64),
                ..spec.config
            };
            run(&spec.problems[p], &cfg).map_err(|e| Error::Run {
                run: r,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut problems = Vec::with_capacity(spec.problems.len());
    for (p, chunk) in spec.problems.iter().zip(results.chunks(spec.runs.max(1))) {
        let finals = chunk.iter().map(|r| r.best.f).collect();
        let evals: Vec<usize> = chunk.iter().map(|r| r.eval_count).collect();
        let traces = chunk.iter().map(|r| r.trace.clone()).collect();
        problems.push(ProblemSummary::from_runs(p, finals, &evals, traces));
    }
    let errors: Vec<f64> = problems.iter().filter_map(|s| s.mean_error).collect();
    let mse = (!errors.is_empty())
        .then(|| errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64);
    Ok(ExperimentSummary {
        runs: spec.runs,
        base_seed: spec.base_seed,
        config: spec.config,
        problems,
        mse,
    })
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Middle value, or the mean of the two middle values for an even count.
pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len();
    if k % 2 == 1 {
        s[k / 2]
    } else {
        (s[k / 2 - 1] + s[k / 2]) / 2.0
    }
}

pub fn sample_sd(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    let ss: f64 = v.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (v.len() - 1) as f64).sqrt()
}

pub const SUMMARY_HEADER: [&str; 7] = ["name", "avg", "mdn", "sd", "fbest", "evals", "mean_error"];
pub const TRACE_HEADER: [&str; 4] = ["problem", "run", "iter", "best_so_far"];

pub fn write_summary_csv<W: Write>(summary: &ExperimentSummary, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for p in &summary.problems {
        w.write_record([
            p.name.clone(),
            p.avg_best.to_string(),
            p.median_best.to_string(),
            p.sd_best.to_string(),
            p.f_best.to_string(),
            p.mean_eval_count.to_string(),
            p.mean_error.map(|e| e.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per problem, run and iteration; runs and iterations are one-based.
pub fn write_trace_csv<W: Write>(summary: &ExperimentSummary, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for p in &summary.problems {
        for (r, trace) in p.traces.iter().enumerate() {
            for (t, f) in trace.iter().enumerate() {
                w.write_record([
                    p.name.clone(),
                    (r + 1).to_string(),
                    (t + 1).to_string(),
                    f.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    SummaryCsv,
    TraceCsv,
    Json,
}

pub fn export(summary: &ExperimentSummary, format: ExportFormat, path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = BufWriter::new(File::create(path).map_err(io)?);
    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(source) => io(source),
        other => Error::Format {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    };
    match format {
        ExportFormat::SummaryCsv => write_summary_csv(summary, file).map_err(csv_err),
        ExportFormat::TraceCsv => write_trace_csv(summary, file).map_err(csv_err),
        ExportFormat::Json => {
            let mut file = file;
            serde_json::to_writer(&mut file, summary).map_err(|e| Error::Format {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?;
            file.flush().map_err(io)
        }
    }
}

/// Writes `summary.csv`, `summary.json` and `traces.csv` into `dir`, creating it if needed.
pub fn export_all(summary: &ExperimentSummary, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    export(summary, ExportFormat::SummaryCsv, &dir.join("summary.csv"))?;
    export(summary, ExportFormat::Json, &dir.join("summary.json"))?;
    export(summary, ExportFormat::TraceCsv, &dir.join("traces.csv"))
}
