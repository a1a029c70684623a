//! Brute-force machinery used to check the solver: exhaustive path enumeration,
//! a dense per-cell search for reference optima, and planted random instances.

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, EvalError, Result};
use crate::fre::{CandidateSets, Cell, FrePath, Instance, Resolution};
use crate::objective::{Objective, Problem};

pub const DEFAULT_CAP: u64 = 1_000_000;
pub const DEFAULT_SAMPLES_PER_CELL: usize = 200;
pub const DEFAULT_REFINE_STEPS: usize = 20;

/// Paths in lexicographic order of `(e(1), …, e(m))`.
#[derive(Debug, Clone)]
pub struct PathIter<'a> {
    sets: &'a CandidateSets,
    odometer: Option<Vec<usize>>,
}

impl<'a> PathIter<'a> {
    pub fn new(sets: &'a CandidateSets) -> Self {
        PathIter {
            sets,
            odometer: Some(vec![0; sets.m()]),
        }
    }
}

impl Iterator for PathIter<'_> {
    type Item = FrePath;

    fn next(&mut self) -> Option<FrePath> {
        let digits = self.odometer.as_mut()?;
        let path = FrePath::new(
            digits
                .iter()
                .enumerate()
                .map(|(i, &d)| self.sets.row(i)[d])
                .collect(),
        );
        // advance the last row fastest
        let mut i = digits.len();
        loop {
            if i == 0 {
                self.odometer = None;
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < self.sets.row(i).len() {
                break;
            }
            digits[i] = 0;
        }
        Some(path)
    }
}

fn check_cap(sets: &CandidateSets, cap: u64) -> Result<()> {
    let size = sets.path_space_size();
    if size > BigUint::from(cap) {
        return Err(Error::CapExceeded { size, cap });
    }
    Ok(())
}

/// Every path, in lexicographic order. Fails with the exact `|E|` when it exceeds `cap`.
pub fn enumerate_paths(sets: &CandidateSets, cap: u64) -> Result<Vec<FrePath>> {
    check_cap(sets, cap)?;
    Ok(PathIter::new(sets).collect())
}

/// A cell of the feasible region with the first path (in lexicographic order) that generates it.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedCell {
    pub path: FrePath,
    pub cell: Cell,
}

/// The cells that are not contained in another cell.
///
/// All cells share the upper corner `x̄`, so a cell is redundant when some other
/// lower corner is componentwise below its own. Duplicate lower corners keep their
/// first path. The union of the returned cells is the whole feasible region.
pub fn maximal_cells(res: &Resolution, cap: u64) -> Result<(u64, Vec<IndexedCell>)> {
    check_cap(&res.sets, cap)?;
    let b = res.instance.b();
    let n = res.instance.n();
    let mut seen = HashSet::new();
    let mut distinct = Vec::new();
    let mut count = 0u64;
    for path in PathIter::new(&res.sets) {
        count += 1;
        let lower = path.lower_bound(b, n)?;
        let key: Vec<u64> = lower.iter().map(|v| v.to_bits()).collect();
        if seen.insert(key) {
            distinct.push((path, lower));
        }
    }
    let dominated = |k: usize| {
        let lo = &distinct[k].1;
        distinct
            .iter()
            .enumerate()
            .any(|(o, (_, other))| o != k && other.iter().zip(lo).all(|(a, b)| a <= b))
    };
    let keep: Vec<bool> = (0..distinct.len()).map(|k| !dominated(k)).collect();
    let cells = distinct
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|((path, lower), _)| IndexedCell {
            path,
            cell: Cell {
                lower,
                upper: res.xbar.as_slice().to_vec(),
            },
        })
        .collect();
    Ok((count, cells))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub problem: String,
    /// `|E|`, the number of paths enumerated.
    pub path_count: u64,
    /// Maximal cells searched after removing duplicates and nested cells.
    pub cells_examined: usize,
    pub samples_per_cell: usize,
    pub refine_steps: usize,
    pub best_value: f64,
    pub best_point: Vec<f64>,
    pub best_path: FrePath,
    pub known_optimum: Option<f64>,
}

/// Dense search of every maximal cell.
///
/// Each cell gets its lower corner plus `samples_per_cell` uniform samples, then a
/// coordinate pattern search from the best of them: the step starts at half the
/// largest edge and is halved `refine_steps` times, each level sweeping until no
/// move improves. Cells run in parallel with their own generators seeded from one
/// draw of `rng`, so the report depends only on `rng`'s state.
pub fn reference_optimum<R: Rng + ?Sized>(
    problem: &Problem,
    samples_per_cell: usize,
    refine_steps: usize,
    cap: u64,
    rng: &mut R,
) -> Result<OracleReport> {
    let res = problem.instance.resolve()?;
    let (path_count, cells) = maximal_cells(&res, cap)?;
    let base: u64 = rng.random();
    let results: Vec<(f64, Vec<f64>)> = cells
        .par_iter()
        .enumerate()
        .map(|(k, c)| {
            let mut cell_rng = ChaCha8Rng::seed_from_u64(base);
            cell_rng.set_stream(k as u64);
            search_cell(
                &problem.objective,
                &c.cell,
                samples_per_cell,
                refine_steps,
                &mut cell_rng,
            )
        })
        .collect::<std::result::Result<_, EvalError>>()?;
    // first minimum wins, so ties resolve to the lexicographically first cell
    let (best_k, (best_value, best_point)) = results
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1 .0 < a.1 .0 { b } else { a })
        .expect("a feasible system has at least one cell");
    Ok(OracleReport {
        problem: problem.name.clone(),
        path_count,
        cells_examined: cells.len(),
        samples_per_cell,
        refine_steps,
        best_value,
        best_point,
        best_path: cells[best_k].path.clone(),
        known_optimum: problem.known_optimum,
    })
}

const MAX_SWEEPS: usize = 64;

fn search_cell<R: Rng + ?Sized>(
    obj: &Objective,
    cell: &Cell,
    samples: usize,
    refine_steps: usize,
    rng: &mut R,
) -> std::result::Result<(f64, Vec<f64>), EvalError> {
    let mut best_x = cell.lower.clone();
    let mut best_f = obj.eval(&best_x)?;
    for _ in 0..samples {
        let x = crate::aco::uniform_in_cell(cell, rng);
        let f = obj.eval(&x)?;
        if f < best_f {
            best_f = f;
            best_x = x;
        }
    }
    let mut step = cell.largest_edge() / 2.0;
    for _ in 0..refine_steps {
        if step == 0.0 {
            break;
        }
        for _ in 0..MAX_SWEEPS {
            let mut moved = false;
            for j in 0..best_x.len() {
                for dir in [-1.0, 1.0] {
                    let mut x = best_x.clone();
                    x[j] = (x[j] + dir * step).max(cell.lower[j]).min(cell.upper[j]);
                    if x[j] == best_x[j] {
                        continue;
                    }
                    let f = obj.eval(&x)?;
                    if f < best_f {
                        best_f = f;
                        best_x = x;
                        moved = true;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        step /= 2.0;
    }
    Ok((best_f, best_x))
}

/// Reference optimum with the default sample count, refinement depth and cap.
pub fn reference_optimum_default(problem: &Problem, seed: u64) -> Result<OracleReport> {
    reference_optimum(
        problem,
        DEFAULT_SAMPLES_PER_CELL,
        DEFAULT_REFINE_STEPS,
        DEFAULT_CAP,
        &mut ChaCha8Rng::seed_from_u64(seed),
    )
}

/// A feasible `m × n` instance built by planting a point.
///
/// Draws `x*` uniform in `[0,1]ⁿ`, then `A` row by row with each entry uniform in
/// `[0,1]` and kept with probability `density` (else 0), and sets `b = A ∘ x*`.
pub fn planted_instance<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    density: f64,
    rng: &mut R,
) -> (Instance, Vec<f64>) {
    assert!(
        m >= 1 && n >= 1,
        "instance needs at least one row and column"
    );
    assert!(
        density > 0.0 && density <= 1.0,
        "density must lie in (0, 1]"
    );
    let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
    let a: Vec<Vec<f64>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let v: f64 = rng.random();
                    let keep: f64 = rng.random();
                    if keep < density {
                        v
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let b = a
        .iter()
        .map(|row| {
            row.iter()
                .zip(&x)
                .map(|(&a, &x)| a.min(x))
                .fold(0.0, f64::max)
        })
        .collect();
    let inst = Instance::new(a, b).expect("generated data lies in [0, 1]");
    (inst, x)
}

pub fn random_feasible_instance<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    density: f64,
    rng: &mut R,
) -> Instance {
    planted_instance(m, n, density, rng).0
}
