//! The two-phase ant colony search.
//!
//! Phase I walks the candidate matrix with pheromone-biased ants to pick cells
//! (boxes `[x̲(e), x̄]` of the feasible region). Phase II keeps a ranked archive of
//! points inside those cells and refines it by Gaussian sampling, projecting every
//! draw back into the parent's cell so no feasibility check is ever needed. The
//! archive then reinforces the paths of good cells.
//!
//! Iteration 1 builds `s_pop` paths, fills the archive with one uniform point per
//! cell and updates the pheromone. Every later iteration builds one path, inserts
//! one uniform point from its cell, draws `samples_per_iteration` Gaussian samples
//! (two by default) against the archive as it stood before the round, truncates the
//! archive back to `s_pop`, and updates the pheromone.
//!
//! ## Random stream
//!
//! One [`ChaCha8Rng`] seeded with `seed_from_u64(config.seed)` drives a run. Per
//! iteration it is consumed in this order:
//!
//! 1. path construction: one `f64` uniform per row per path;
//! 2. uniform cell points: one `f64` uniform per coordinate per new point;
//! 3. each Gaussian sample: one `f64` uniform for rank selection, then one
//!    `StandardNormal` (ziggurat, `rand_distr`) per coordinate.

mod archive;
mod pheromone;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, Result};
use crate::fre::{Resolution, EQ_TOL};
use crate::objective::Problem;

pub use archive::{
    init_archive, sample_solution, select_rank, sigma, uniform_in_cell, weights, Archive,
    ArchiveSolution, Evaluator,
};
pub use pheromone::{
    construct_paths, deposit_amount, PheromoneMatrix, ProbabilityMatrix, DEGENERATE_ROW_SUM,
    DEPOSIT_EXPONENT_LIMIT,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Archive size; also the number of ants in the first iteration.
    pub s_pop: usize,
    /// Locality of rank selection; small values favour the best entries.
    pub q: f64,
    /// Width multiplier for the sampling kernels.
    pub xi: f64,
    /// Evaporation rate in `[0, 1)`.
    pub rho: f64,
    /// Deposit constant.
    pub big_q: f64,
    pub t_max: usize,
    pub seed: u64,
    /// Gaussian samples drawn per iteration after the first. Zero disables Phase II sampling.
    pub samples_per_iteration: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            s_pop: 50,
            q: 0.0125,
            xi: 1.0,
            rho: 0.5,
            big_q: 1.0,
            t_max: 100,
            seed: 0,
            samples_per_iteration: 2,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        SolverConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: &str| Err(ConfigError(msg.to_string()));
        if self.s_pop < 2 {
            return fail("s_pop must be at least 2");
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return fail("q must be positive");
        }
        if !(self.xi > 0.0 && self.xi.is_finite()) {
            return fail("xi must be positive");
        }
        if !(0.0..1.0).contains(&self.rho) {
            return fail("rho must lie in [0, 1)");
        }
        if !(self.big_q > 0.0 && self.big_q.is_finite()) {
            return fail("deposit constant must be positive");
        }
        if self.t_max < 1 {
            return fail("t_max must be at least 1");
        }
        Ok(())
    }

    /// Objective evaluations a full run performs.
    pub fn evaluation_budget(&self) -> usize {
        self.s_pop + (1 + self.samples_per_iteration) * (self.t_max - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best: ArchiveSolution,
    /// Best objective value after each iteration.
    pub trace: Vec<f64>,
    pub eval_count: usize,
    pub seed: u64,
    pub config: SolverConfig,
    pub archive: Archive,
}

/// Runs the full schedule.
pub fn run(problem: &Problem, config: &SolverConfig) -> Result<RunResult> {
    let mut solver = Solver::new(problem, config)?;
    while !solver.is_done() {
        solver.step()?;
    }
    Ok(solver.finish())
}

/// Iteration-at-a-time driver, for callers that want to inspect intermediate state.
#[derive(Debug)]
pub struct Solver<'a> {
    problem: &'a Problem,
    res: Resolution,
    config: SolverConfig,
    rng: ChaCha8Rng,
    tau: PheromoneMatrix,
    archive: Archive,
    weights: Vec<f64>,
    iteration: usize,
    evaluator: Evaluator<'a>,
    trace: Vec<f64>,
}

impl<'a> Solver<'a> {
    /// Validates the configuration and resolves the system; fails on infeasible problems.
    pub fn new(problem: &'a Problem, config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        let res = problem.instance.resolve()?;
        let tau = PheromoneMatrix::init(&res.sets);
        Ok(Solver {
            problem,
            config: *config,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            tau,
            archive: Archive::default(),
            weights: weights(config.s_pop, config.q),
            iteration: 0,
            evaluator: Evaluator::new(&problem.objective),
            trace: Vec::with_capacity(config.t_max),
            res,
        })
    }

    pub fn is_done(&self) -> bool {
        self.iteration >= self.config.t_max
    }

    /// Completed iterations.
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn archive(&self) -> &Archive {
        &self.archive
    }

    pub fn pheromone(&self) -> &PheromoneMatrix {
        &self.tau
    }

    pub fn resolution(&self) -> &Resolution {
        &self.res
    }

    pub fn eval_count(&self) -> usize {
        self.evaluator.count()
    }

    pub fn trace(&self) -> &[f64] {
        &self.trace
    }

    /// Performs one iteration.
    pub fn step(&mut self) -> Result<()> {
        let cfg = self.config;
        let p = self.tau.probability_matrix();
        if self.iteration == 0 {
            let paths = construct_paths(&p, &self.res.sets, cfg.s_pop, &mut self.rng);
            self.archive = init_archive(paths, &self.res, &mut self.evaluator, &mut self.rng)?;
        } else {
            let path = construct_paths(&p, &self.res.sets, 1, &mut self.rng)
                .pop()
                .expect("one path requested");
            let fresh =
                archive::solution_in_cell(path, &self.res, &mut self.evaluator, &mut self.rng)?;
            self.archive.merge([fresh], cfg.s_pop);

            let mut samples = Vec::with_capacity(cfg.samples_per_iteration);
            for _ in 0..cfg.samples_per_iteration {
                let rank = select_rank(&self.weights, &mut self.rng);
                samples.push(sample_solution(
                    &self.archive,
                    rank,
                    cfg.xi,
                    &self.res.xbar,
                    &mut self.evaluator,
                    &mut self.rng,
                )?);
            }
            self.archive.merge(samples, cfg.s_pop);
        }
        self.tau.update(&self.archive, cfg.big_q, cfg.rho);
        self.iteration += 1;
        self.trace.push(self.archive.get(0).f);
        debug_assert!(self.archive_is_feasible());
        Ok(())
    }

    fn archive_is_feasible(&self) -> bool {
        let xbar = self.res.xbar.as_slice();
        self.archive.entries().iter().all(|s| {
            let boxed =
                s.x.iter()
                    .zip(&s.lb)
                    .zip(xbar)
                    .all(|((x, lo), hi)| lo <= x && x <= hi);
            boxed
                && self
                    .problem
                    .instance
                    .residual(&s.x)
                    .is_ok_and(|r| r <= EQ_TOL)
        })
    }

    pub fn finish(self) -> RunResult {
        RunResult {
            best: self
                .archive
                .best()
                .cloned()
                .expect("finish called before the first iteration"),
            trace: self.trace,
            eval_count: self.evaluator.count(),
            seed: self.config.seed,
            config: self.config,
            archive: self.archive,
        }
    }
}
