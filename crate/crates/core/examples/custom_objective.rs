//! Minimise a user-written objective over a planted random system, stepping the
//! solver by hand to watch the archive.

use fre_aco::aco::{Solver, SolverConfig};
use fre_aco::objective::{Objective, Problem};
use fre_aco::oracle::planted_instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fre_aco::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (instance, planted) = planted_instance(6, 8, 0.8, &mut rng);
    let objective = Objective::parse(
        "sum(k, 1, 7, (x(k) - 0.5)^2 * (k + 1)) + sin(3*x8) - ln(1 + x1*x2)",
        8,
    )?;
    println!("planted point value: {:.6}", objective.eval(&planted)?);
    let problem = Problem {
        name: "custom".into(),
        instance,
        objective,
        known_optimum: None,
    };

    let config = SolverConfig {
        t_max: 60,
        ..SolverConfig::with_seed(3)
    };
    let mut solver = Solver::new(&problem, &config)?;
    println!("|E| = {}", solver.resolution().sets.path_space_size());
    while !solver.is_done() {
        solver.step()?;
        if solver.iteration() % 10 == 0 {
            let a = solver.archive();
            println!(
                "iteration {:>2}: best {:.6}, worst kept {:.6}, evaluations {}",
                solver.iteration(),
                a.get(0).f,
                a.get(a.len() - 1).f,
                solver.eval_count()
            );
        }
    }
    let result = solver.finish();
    println!("best x = {:?}", result.best.x);
    Ok(())
}
