//! Compare the solver with an exhaustive per-cell search on every builtin.

use fre_aco::aco::{run, SolverConfig};
use fre_aco::objective::builtin_problems;
use fre_aco::oracle::reference_optimum_default;

fn main() -> fre_aco::Result<()> {
    println!(
        "{:<11} {:>4} {:>6} {:>14} {:>14} {:>12}",
        "problem", "|E|", "cells", "oracle", "solver", "known"
    );
    for p in builtin_problems() {
        let report = reference_optimum_default(&p, 0)?;
        let solved = run(&p, &SolverConfig::with_seed(1))?;
        println!(
            "{:<11} {:>4} {:>6} {:>14.7} {:>14.7} {:>12}",
            p.name,
            report.path_count,
            report.cells_examined,
            report.best_value,
            solved.best.f,
            p.known_optimum.map(|v| v.to_string()).unwrap_or_default()
        );
    }
    Ok(())
}
