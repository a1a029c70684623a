//! Structure of max-min fuzzy relational equations `A ∘ x = b`.
//!
//! The feasible set of such a system is a finite union of boxes that all share
//! the maximum solution as their upper corner. Each box is indexed by a path
//! through the candidate matrix: one candidate column per row. Everything in
//! this module is deterministic and cheap; the stochastic search lives in
//! [`crate::aco`].
//!
//! Indices are zero-based throughout the API. Anything shown to humans (CLI
//! output, JSON files) converts to one-based at the edge.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::FreError;

/// Tolerance for every equality test against `b` and for feasibility checks.
pub const EQ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct Instance {
    m: usize,
    n: usize,
    /// Row-major `m × n`.
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = FreError;

    fn try_from(raw: RawInstance) -> Result<Self, Self::Error> {
        Instance::new(raw.a, raw.b)
    }
}

impl From<Instance> for RawInstance {
    fn from(inst: Instance) -> Self {
        RawInstance {
            a: inst.rows().map(<[f64]>::to_vec).collect(),
            b: inst.b,
        }
    }
}

impl Instance {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self, FreError> {
        let m = a.len();
        if m == 0 || a[0].is_empty() {
            return Err(FreError::Empty);
        }
        let n = a[0].len();
        if b.len() != m {
            return Err(FreError::DimensionMismatch {
                expected: m,
                actual: b.len(),
            });
        }
        let mut flat = Vec::with_capacity(m * n);
        for (i, row) in a.into_iter().enumerate() {
            if row.len() != n {
                return Err(FreError::RaggedMatrix {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(FreError::OutOfUnitInterval {
                        what: "A",
                        index: (i, j),
                        value: v,
                    });
                }
            }
            flat.extend(row);
        }
        for (i, &v) in b.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(FreError::OutOfUnitInterval {
                    what: "b",
                    index: (i, 0),
                    value: v,
                });
            }
        }
        Ok(Instance { m, n, a: flat, b })
    }

    /// Number of equations.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.a.chunks_exact(self.n)
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `(A ∘ x)_i = max_j min(a_ij, x_j)`.
    pub fn max_min_compose(&self, x: &[f64]) -> Result<Vec<f64>, FreError> {
        if x.len() != self.n {
            return Err(FreError::DimensionMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        Ok(self
            .rows()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .map(|(&a, &xj)| a.min(xj))
                    .fold(0.0, f64::max)
            })
            .collect())
    }

    /// Largest componentwise deviation `‖A ∘ x − b‖∞`.
    pub fn residual(&self, x: &[f64]) -> Result<f64, FreError> {
        Ok(self
            .max_min_compose(x)?
            .iter()
            .zip(&self.b)
            .map(|(l, r)| (l - r).abs())
            .fold(0.0, f64::max))
    }

    /// Closed-form greatest candidate: `x̄_j = min{b_i : a_ij > b_i}`, or 1 when no row
    /// strictly exceeds its right-hand side in column `j`.
    ///
    /// This is only a solution when the system is feasible; see [`Instance::is_feasible`].
    pub fn max_solution(&self) -> MaxSolution {
        let xbar = (0..self.n)
            .map(|j| {
                (0..self.m)
                    .filter(|&i| self.a(i, j) > self.b[i])
                    .map(|i| self.b[i])
                    .fold(1.0, f64::min)
            })
            .collect();
        MaxSolution(xbar)
    }

    pub fn is_feasible(&self, eps: f64) -> bool {
        let xbar = self.max_solution();
        self.residual(xbar.as_slice())
            .map(|r| r <= eps)
            .unwrap_or(false)
    }

    /// Returns `x̄` when it solves the system, otherwise the rows it violates.
    pub fn check_feasible(&self, eps: f64) -> Result<MaxSolution, FreError> {
        let xbar = self.max_solution();
        let composed = self.max_min_compose(xbar.as_slice())?;
        let violated: Vec<usize> = composed
            .iter()
            .zip(&self.b)
            .enumerate()
            .filter(|(_, (l, r))| (*l - *r).abs() > eps)
            .map(|(i, _)| i + 1)
            .collect();
        if violated.is_empty() {
            Ok(xbar)
        } else {
            Err(FreError::Infeasible {
                xbar: xbar.0,
                violated_rows: violated,
            })
        }
    }

    /// `J̄(i) = {j : min(a_ij, x̄_j) = b_i}`. An empty row means the system has no solution.
    pub fn candidate_sets(&self, xbar: &MaxSolution, eps: f64) -> Result<CandidateSets, FreError> {
        if xbar.len() != self.n {
            return Err(FreError::DimensionMismatch {
                expected: self.n,
                actual: xbar.len(),
            });
        }
        let sets: Vec<Vec<usize>> = (0..self.m)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| (self.a(i, j).min(xbar[j]) - self.b[i]).abs() <= eps)
                    .collect()
            })
            .collect();
        let empty: Vec<usize> = sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_empty())
            .map(|(i, _)| i + 1)
            .collect();
        if !empty.is_empty() {
            return Err(FreError::Infeasible {
                xbar: xbar.0.clone(),
                violated_rows: empty,
            });
        }
        Ok(CandidateSets { n: self.n, sets })
    }

    /// Computes `x̄` and the candidate sets in one go, failing on infeasible systems.
    pub fn resolve(&self) -> Result<Resolution, FreError> {
        let xbar = self.check_feasible(EQ_TOL)?;
        let sets = self.candidate_sets(&xbar, EQ_TOL)?;
        Ok(Resolution {
            instance: self.clone(),
            xbar,
            sets,
        })
    }
}

/// The componentwise-greatest solution `x̄`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MaxSolution(Vec<f64>);

impl MaxSolution {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Deref for MaxSolution {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Candidate columns `J̄(i)` for each row, sorted ascending, zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSets {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl CandidateSets {
    /// Builds sets directly; each set is sorted and deduplicated.
    pub fn from_sets(n: usize, mut sets: Vec<Vec<usize>>) -> Result<Self, FreError> {
        for set in &mut sets {
            set.sort_unstable();
            set.dedup();
            if let Some(&j) = set.iter().find(|&&j| j >= n) {
                return Err(FreError::ColumnOutOfRange { index: j, n });
            }
        }
        Ok(CandidateSets { n, sets })
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.sets.iter().map(Vec::as_slice)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.sets[i].binary_search(&j).is_ok()
    }

    /// One-based copy for display.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.sets
            .iter()
            .map(|s| s.iter().map(|j| j + 1).collect())
            .collect()
    }

    /// `m_ij = b_i` on candidate entries, zero elsewhere.
    pub fn candidate_matrix(&self, b: &[f64]) -> Result<CandidateMatrix, FreError> {
        if b.len() != self.m() {
            return Err(FreError::DimensionMismatch {
                expected: self.m(),
                actual: b.len(),
            });
        }
        let mut values = vec![0.0; self.m() * self.n];
        for (i, set) in self.sets.iter().enumerate() {
            for &j in set {
                values[i * self.n + j] = b[i];
            }
        }
        Ok(CandidateMatrix {
            m: self.m(),
            n: self.n,
            values,
        })
    }

    /// `|E| = ∏ |J̄(i)|`, exact.
    pub fn path_space_size(&self) -> BigUint {
        self.sets
            .iter()
            .fold(BigUint::from(1u32), |acc, s| acc * BigUint::from(s.len()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateMatrix {
    m: usize,
    n: usize,
    values: Vec<f64>,
}

impl CandidateMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }
}

/// One candidate column per row (zero-based). Serialized one-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct FrePath(Vec<usize>);

impl From<FrePath> for Vec<usize> {
    fn from(p: FrePath) -> Self {
        p.to_one_based()
    }
}

impl TryFrom<Vec<usize>> for FrePath {
    type Error = FreError;

    fn try_from(v: Vec<usize>) -> Result<Self, FreError> {
        FrePath::from_one_based(&v)
    }
}

impl FrePath {
    pub fn new(columns: Vec<usize>) -> Self {
        FrePath(columns)
    }

    pub fn from_one_based(columns: &[usize]) -> Result<Self, FreError> {
        columns
            .iter()
            .map(|&j| {
                j.checked_sub(1)
                    .ok_or(FreError::ColumnOutOfRange { index: 0, n: 0 })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FrePath)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|j| j + 1).collect()
    }

    pub fn columns(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, sets: &CandidateSets) -> Result<(), FreError> {
        if self.len() != sets.m() {
            return Err(FreError::DimensionMismatch {
                expected: sets.m(),
                actual: self.len(),
            });
        }
        for (i, &j) in self.0.iter().enumerate() {
            if !sets.contains(i, j) {
                return Err(FreError::InvalidPath { row: i, column: j });
            }
        }
        Ok(())
    }

    /// Minimal candidate solution: `x̲(e)_j = max{b_i : e(i) = j}`, or 0 if no row picks `j`.
    pub fn lower_bound(&self, b: &[f64], n: usize) -> Result<Vec<f64>, FreError> {
        if b.len() != self.len() {
            return Err(FreError::DimensionMismatch {
                expected: self.len(),
                actual: b.len(),
            });
        }
        let mut x = vec![0.0f64; n];
        for (&j, &bi) in self.0.iter().zip(b) {
            let slot = x
                .get_mut(j)
                .ok_or(FreError::ColumnOutOfRange { index: j, n })?;
            *slot = slot.max(bi);
        }
        Ok(x)
    }
}

/// Closed box `[lower, upper]`, with `upper = x̄` for cells of a system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Cell {
    pub fn from_path(path: &FrePath, res: &Resolution) -> Result<Cell, FreError> {
        path.validate(&res.sets)?;
        let lower = path.lower_bound(res.instance.b(), res.instance.n())?;
        let upper = res.xbar.as_slice().to_vec();
        assert!(
            lower.iter().zip(&upper).all(|(l, u)| *l <= *u + EQ_TOL),
            "candidate {lower:?} exceeds maximum solution {upper:?}"
        );
        Ok(Cell { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Projects `x` onto the box coordinate by coordinate.
    pub fn clamp(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&lo, &hi))| v.max(lo).min(hi))
            .collect()
    }

    pub fn contains(&self, x: &[f64], eps: f64) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| v >= lo - eps && v <= hi + eps)
    }

    /// True when `other` lies inside `self`.
    pub fn covers(&self, other: &Cell, eps: f64) -> bool {
        self.contains(&other.lower, eps) && self.contains(&other.upper, eps)
    }

    pub fn largest_edge(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .fold(0.0, f64::max)
    }
}

/// A feasible system together with its maximum solution and candidate sets.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    pub instance: Instance,
    pub xbar: MaxSolution,
    pub sets: CandidateSets,
}

impl Resolution {
    pub fn cell(&self, path: &FrePath) -> Result<Cell, FreError> {
        Cell::from_path(path, self)
    }
}
