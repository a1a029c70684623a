//! Pheromone state on the candidate matrix and path construction from it.

use rand::Rng;

use super::archive::Archive;
use crate::fre::{CandidateSets, FrePath};

/// Row sums below this are treated as collapsed and reset to the initial state.
pub const DEGENERATE_ROW_SUM: f64 = 1e-12;

/// Bound applied to the exponent of a deposit `Q·exp(−f)`.
pub const DEPOSIT_EXPONENT_LIMIT: f64 = 700.0;

/// Pheromone `τ`, nonzero only on candidate entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneMatrix {
    sets: CandidateSets,
    tau: Vec<f64>,
}

impl PheromoneMatrix {
    /// `τ_ij = 1` on candidate entries, 0 elsewhere.
    pub fn init(sets: &CandidateSets) -> Self {
        let n = sets.n();
        let mut tau = vec![0.0; sets.m() * n];
        for (i, row) in sets.iter().enumerate() {
            for &j in row {
                tau[i * n + j] = 1.0;
            }
        }
        PheromoneMatrix {
            sets: sets.clone(),
            tau,
        }
    }

    pub fn m(&self) -> usize {
        self.sets.m()
    }

    pub fn n(&self) -> usize {
        self.sets.n()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.tau[i * self.n() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.tau[i * n..(i + 1) * n]
    }

    pub fn sets(&self) -> &CandidateSets {
        &self.sets
    }

    /// `p_ij = τ_ij / Σ_k τ_ik`. A collapsed row is read as uniform over its candidates.
    pub fn probability_matrix(&self) -> ProbabilityMatrix {
        let n = self.n();
        let mut p = vec![0.0; self.tau.len()];
        for (i, cand) in self.sets.iter().enumerate() {
            let row = self.row(i);
            let total: f64 = cand.iter().map(|&j| row[j]).sum();
            if total < DEGENERATE_ROW_SUM || !total.is_finite() {
                let u = 1.0 / cand.len() as f64;
                for &j in cand {
                    p[i * n + j] = u;
                }
            } else {
                for &j in cand {
                    p[i * n + j] = row[j] / total;
                }
            }
        }
        ProbabilityMatrix { n, p }
    }

    /// Adds `Q·exp(−f)` to `τ[i, e(i)]` for every row, with the exponent clamped to ±700.
    pub fn deposit(&mut self, path: &FrePath, f: f64, big_q: f64) {
        let amount = deposit_amount(f, big_q);
        let n = self.n();
        for (i, &j) in path.columns().iter().enumerate() {
            debug_assert!(
                self.sets.contains(i, j),
                "deposit off the candidate support"
            );
            let cell = &mut self.tau[i * n + j];
            *cell = (*cell + amount).min(f64::MAX);
        }
    }

    pub fn evaporate(&mut self, rho: f64) {
        let keep = 1.0 - rho;
        for v in &mut self.tau {
            *v *= keep;
        }
    }

    /// Resets rows whose total fell below [`DEGENERATE_ROW_SUM`] to the initial ones.
    /// Returns how many rows were reset.
    pub fn reset_degenerate_rows(&mut self) -> usize {
        let n = self.n();
        let mut reset = 0;
        for (i, cand) in self.sets.iter().enumerate() {
            let total: f64 = cand.iter().map(|&j| self.tau[i * n + j]).sum();
            if total < DEGENERATE_ROW_SUM {
                for &j in cand {
                    self.tau[i * n + j] = 1.0;
                }
                reset += 1;
            }
        }
        reset
    }

    /// One deposit per archive entry, then one evaporation, then the degeneracy reset.
    pub fn update(&mut self, archive: &Archive, big_q: f64, rho: f64) {
        for sol in archive.entries() {
            self.deposit(&sol.path, sol.f, big_q);
        }
        self.evaporate(rho);
        self.reset_degenerate_rows();
    }
}

pub fn deposit_amount(f: f64, big_q: f64) -> f64 {
    if f.is_nan() {
        return 0.0;
    }
    big_q * (-f.clamp(-DEPOSIT_EXPONENT_LIMIT, DEPOSIT_EXPONENT_LIMIT)).exp()
}

/// Row-stochastic matrix over the candidate columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix {
    n: usize,
    p: Vec<f64>,
}

impl ProbabilityMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.p[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.p.chunks_exact(self.n)
    }
}

/// Builds `count` paths, drawing each row's column from its categorical distribution.
///
/// Consumes exactly one uniform draw per row per path, rows in order, even for
/// rows with a single candidate.
pub fn construct_paths<R: Rng + ?Sized>(
    p: &ProbabilityMatrix,
    sets: &CandidateSets,
    count: usize,
    rng: &mut R,
) -> Vec<FrePath> {
    (0..count)
        .map(|_| {
            let cols = sets
                .iter()
                .enumerate()
                .map(|(i, cand)| {
                    let u: f64 = rng.random();
                    let row = p.row(i);
                    let mut acc = 0.0;
                    for &j in cand {
                        acc += row[j];
                        if u < acc {
                            return j;
                        }
                    }
                    // rounding left the cumulative sum just under 1
                    *cand.last().expect("candidate rows are nonempty")
                })
                .collect();
            FrePath::new(cols)
        })
        .collect()
}
