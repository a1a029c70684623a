//! Generate a planted system, enumerate its paths and reduce them to maximal cells.

use fre_aco::fre::EQ_TOL;
use fre_aco::oracle::{enumerate_paths, maximal_cells, planted_instance, DEFAULT_CAP};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fre_aco::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (inst, planted) = planted_instance(5, 5, 0.6, &mut rng);
    println!("b = {:?}", inst.b());
    println!("planted residual = {:e}", inst.residual(&planted)?);

    let res = inst.resolve()?;
    println!("x̄ = {:?}", res.xbar.as_slice());
    println!("J = {:?}", res.sets.to_one_based());

    let paths = enumerate_paths(&res.sets, DEFAULT_CAP)?;
    let all_feasible = paths.iter().all(|e| {
        let x = e.lower_bound(inst.b(), inst.n()).expect("valid path");
        inst.residual(&x).expect("dimension") <= EQ_TOL
    });
    println!(
        "{} paths, every candidate feasible: {all_feasible}",
        paths.len()
    );

    let (_, cells) = maximal_cells(&res, DEFAULT_CAP)?;
    println!("{} maximal cells:", cells.len());
    for c in &cells {
        println!("  {:?} from {:?}", c.cell.lower, c.path.to_one_based());
    }
    Ok(())
}
