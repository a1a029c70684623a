//! Solve one builtin problem with the default parameters.
//!
//! `cargo run --example solve_builtin -- 6 42` solves problem 6 with seed 42.

use fre_aco::aco::{run, SolverConfig};
use fre_aco::objective::builtin_problem;

fn main() -> fre_aco::Result<()> {
    let mut args = std::env::args().skip(1);
    let index: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let problem = builtin_problem(index).expect("builtin index in 1..=10");

    let result = run(&problem, &SolverConfig::with_seed(seed))?;
    println!("{}: {}", problem.name, problem.objective);
    for t in [0, 9, 24, 49, 99] {
        println!("  iteration {:>3}: {:.6}", t + 1, result.trace[t]);
    }
    println!("best f    = {}", result.best.f);
    println!("known     = {:?}", problem.known_optimum);
    println!("best x    = {:?}", result.best.x);
    println!("best path = {:?}", result.best.path.to_one_based());
    println!("evaluations = {}", result.eval_count);
    Ok(())
}
