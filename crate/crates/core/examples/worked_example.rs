//! The small 5×6 system: maximum solution, candidate sets, path count and one cell.

use fre_aco::fre::{FrePath, Instance};
use fre_aco::objective::Objective;

fn main() -> fre_aco::Result<()> {
    let inst = Instance::new(
        vec![
            vec![0.7, 0.3, 0.8, 0.4, 0.8, 0.7],
            vec![0.5, 0.9, 0.5, 0.4, 0.2, 0.2],
            vec![0.2, 0.2, 0.5, 0.3, 0.0, 0.3],
            vec![0.0, 0.1, 0.0, 0.6, 0.1, 0.0],
            vec![0.6, 0.5, 0.2, 0.5, 0.5, 0.6],
        ],
        vec![0.7, 0.5, 0.3, 0.1, 0.6],
    )?;
    let res = inst.resolve()?;
    println!("x̄ = {:?}", res.xbar.as_slice());
    for (i, set) in res.sets.to_one_based().iter().enumerate() {
        println!("J({}) = {set:?}", i + 1);
    }
    println!("|E| = {}", res.sets.path_space_size());

    let m = res.sets.candidate_matrix(inst.b())?;
    println!("candidate matrix:");
    for row in m.rows() {
        println!("  {row:?}");
    }

    let path = FrePath::from_one_based(&[5, 1, 6, 5, 1])?;
    let cell = res.cell(&path)?;
    println!(
        "cell of {:?}: [{:?}, {:?}]",
        path.to_one_based(),
        cell.lower,
        cell.upper
    );

    let f = Objective::parse("x1*x4 - x2*x3*x5 + x6^2", 6)?;
    let x = [0.8, 0.3, 0.2, 0.0, 0.7, 1.0];
    println!("f({x:?}) = {}", f.eval(&x)?);
    println!("inside the cell: {}", cell.contains(&x, 0.0));
    Ok(())
}
