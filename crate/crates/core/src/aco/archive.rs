//! The ranked solution archive and Gaussian-kernel sampling inside cells.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::fre::{Cell, FrePath, Resolution};
use crate::objective::Objective;

/// A feasible point together with the cell it lives in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveSolution {
    pub x: Vec<f64>,
    /// Lower corner of the cell; the upper corner is always `x̄`.
    pub lb: Vec<f64>,
    pub path: FrePath,
    pub f: f64,
}

/// Solutions sorted ascending by objective; ties keep insertion order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Archive {
    entries: Vec<ArchiveSolution>,
}

impl Archive {
    pub fn from_solutions(mut entries: Vec<ArchiveSolution>) -> Self {
        entries.sort_by(|a, b| a.f.total_cmp(&b.f));
        Archive { entries }
    }

    pub fn entries(&self) -> &[ArchiveSolution] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rank 0 is the best solution.
    pub fn get(&self, rank: usize) -> &ArchiveSolution {
        &self.entries[rank]
    }

    pub fn best(&self) -> Option<&ArchiveSolution> {
        self.entries.first()
    }

    /// Appends, re-sorts (stable) and keeps the `capacity` best.
    pub fn merge(&mut self, new: impl IntoIterator<Item = ArchiveSolution>, capacity: usize) {
        self.entries.extend(new);
        self.entries.sort_by(|a, b| a.f.total_cmp(&b.f));
        self.entries.truncate(capacity);
    }

    pub fn into_entries(self) -> Vec<ArchiveSolution> {
        self.entries
    }
}

/// Objective wrapper that counts evaluations.
#[derive(Debug)]
pub struct Evaluator<'a> {
    objective: &'a Objective,
    count: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(objective: &'a Objective) -> Self {
        Evaluator {
            objective,
            count: 0,
        }
    }

    pub fn eval(&mut self, x: &[f64]) -> Result<f64, EvalError> {
        self.count += 1;
        self.objective.eval(x)
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Uniform point in a cell, one draw per coordinate.
pub fn uniform_in_cell<R: Rng + ?Sized>(cell: &Cell, rng: &mut R) -> Vec<f64> {
    cell.lower
        .iter()
        .zip(&cell.upper)
        .map(|(&lo, &hi)| {
            let u: f64 = rng.random();
            (lo + (hi - lo) * u).min(hi)
        })
        .collect()
}

/// One uniformly sampled, evaluated solution per path. The result is sorted.
pub fn init_archive<R: Rng + ?Sized>(
    paths: Vec<FrePath>,
    res: &Resolution,
    eval: &mut Evaluator<'_>,
    rng: &mut R,
) -> Result<Archive, crate::Error> {
    let mut sols = Vec::with_capacity(paths.len());
    for path in paths {
        sols.push(solution_in_cell(path, res, eval, rng)?);
    }
    Ok(Archive::from_solutions(sols))
}

pub(crate) fn solution_in_cell<R: Rng + ?Sized>(
    path: FrePath,
    res: &Resolution,
    eval: &mut Evaluator<'_>,
    rng: &mut R,
) -> Result<ArchiveSolution, crate::Error> {
    let cell = res.cell(&path)?;
    let x = uniform_in_cell(&cell, rng);
    let f = eval.eval(&x)?;
    Ok(ArchiveSolution {
        x,
        lb: cell.lower,
        path,
        f,
    })
}

/// Rank weights `ω_l = exp(−(l−1)² / (2 q² k²)) / (q k √(2π))` for `l = 1..k`.
pub fn weights(s_pop: usize, q: f64) -> Vec<f64> {
    let width = q * s_pop as f64;
    let scale = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * width);
    (0..s_pop)
        .map(|l| {
            let z = l as f64 / width;
            scale * (-0.5 * z * z).exp()
        })
        .collect()
}

/// Draws a zero-based rank with probability proportional to its weight.
pub fn select_rank<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (l, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return l;
        }
    }
    weights.len() - 1
}

/// Mean absolute distance, scaled by `ξ`, from the `rank` entry to all entries in coordinate `j`.
pub fn sigma(archive: &Archive, rank: usize, j: usize, xi: f64) -> f64 {
    let k = archive.len();
    debug_assert!(k >= 2);
    let centre = archive.get(rank).x[j];
    let spread: f64 = archive
        .entries()
        .iter()
        .map(|s| (s.x[j] - centre).abs())
        .sum();
    xi * spread / (k - 1) as f64
}

/// Gaussian perturbation of the `rank` entry, projected back onto its cell.
///
/// Draws one standard normal per coordinate in order, even where `σ = 0`.
pub fn sample_solution<R: Rng + ?Sized>(
    archive: &Archive,
    rank: usize,
    xi: f64,
    xbar: &[f64],
    eval: &mut Evaluator<'_>,
    rng: &mut R,
) -> Result<ArchiveSolution, EvalError> {
    let parent = archive.get(rank);
    let x: Vec<f64> = (0..parent.x.len())
        .map(|j| {
            let z: f64 = rng.sample(StandardNormal);
            let sd = sigma(archive, rank, j, xi);
            (parent.x[j] + sd * z).max(parent.lb[j]).min(xbar[j])
        })
        .collect();
    let f = eval.eval(&x)?;
    Ok(ArchiveSolution {
        x,
        lb: parent.lb.clone(),
        path: parent.path.clone(),
        f,
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn sol(x: Vec<f64>, f: f64) -> ArchiveSolution {
        ArchiveSolution {
            lb: vec![0.0; x.len()],
            x,
            path: FrePath::new(vec![0]),
            f,
        }
    }

    #[test]
    fn weights_match_direct_evaluation() {
        let w = weights(50, 0.0125);
        let first = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * 0.0125 * 50.0);
        assert!((w[0] - first).abs() < 1e-15);
        // exp(-1/(2·0.625²)) = exp(-1.28)
        assert!((w[1] - first * (-1.28f64).exp()).abs() < 1e-15);
        assert!((w[0] - 0.638_308).abs() < 1e-6);
        assert!((w[1] - 0.177_473).abs() < 1e-6);
        assert!(w.windows(2).all(|p| p[0] > p[1] || p[1] == 0.0));
    }

    #[test]
    fn one_entry_always_rank_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!((0..100).all(|_| select_rank(&weights(1, 0.0125), &mut rng) == 0));
    }

    #[test]
    fn sigma_cases() {
        let same =
            Archive::from_solutions(vec![sol(vec![0.3, 0.1], 1.0), sol(vec![0.3, 0.5], 2.0)]);
        assert_eq!(sigma(&same, 0, 0, 1.0), 0.0);
        assert!((sigma(&same, 0, 1, 1.0) - 0.4).abs() < 1e-15);
        assert!((sigma(&same, 1, 1, 2.0) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn zero_spread_returns_parent() {
        let obj = Objective::parse("x1 + x2", 2).unwrap();
        let mut eval = Evaluator::new(&obj);
        let archive =
            Archive::from_solutions(vec![sol(vec![0.2, 0.7], 0.9), sol(vec![0.2, 0.7], 0.9)]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = sample_solution(&archive, 0, 1.0, &[1.0, 1.0], &mut eval, &mut rng).unwrap();
        assert_eq!(s.x, vec![0.2, 0.7]);
        assert_eq!(eval.count(), 1);
    }

    #[test]
    fn stable_ties() {
        let mut a = Archive::from_solutions(vec![sol(vec![0.1], 1.0), sol(vec![0.2], 0.5)]);
        a.merge([sol(vec![0.3], 1.0), sol(vec![0.4], 0.1)], 3);
        let xs: Vec<f64> = a.entries().iter().map(|s| s.x[0]).collect();
        assert_eq!(xs, vec![0.4, 0.2, 0.1]);
    }

    #[test]
    fn degenerate_cell_gives_its_point() {
        let cell = Cell {
            lower: vec![0.3, 0.6],
            upper: vec![0.3, 0.6],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(uniform_in_cell(&cell, &mut rng), vec![0.3, 0.6]);
    }
}
