//! Iteration-averaged error with and without the Gaussian sampling phase.

use fre_aco::aco::SolverConfig;
use fre_aco::bench::{run_experiment, ExperimentSpec};
use fre_aco::objective::builtin_problems;

fn main() -> fre_aco::Result<()> {
    let errors = |samples_per_iteration| -> fre_aco::Result<Vec<f64>> {
        let spec = ExperimentSpec {
            config: SolverConfig {
                samples_per_iteration,
                ..SolverConfig::default()
            },
            ..ExperimentSpec::new(builtin_problems())
        };
        Ok(run_experiment(&spec)?
            .problems
            .iter()
            .map(|p| p.mean_error.unwrap_or(f64::NAN))
            .collect())
    };
    let full = errors(2)?;
    let ablated = errors(0)?;
    println!("{:<8} {:>12} {:>12}", "problem", "sampling", "ablated");
    for (k, (a, b)) in full.iter().zip(&ablated).enumerate() {
        println!("{:<8} {:>12.6} {:>12.6}", k + 1, a, b);
    }
    Ok(())
}
