//! Thirty seeded runs per builtin; prints the summary table and the overall MSE.
//!
//! Pass a directory to also write summary.csv, summary.json and traces.csv.

use fre_aco::bench::{export_all, run_experiment, write_summary_csv, ExperimentSpec};
use fre_aco::objective::builtin_problems;

fn main() -> fre_aco::Result<()> {
    let spec = ExperimentSpec::new(builtin_problems());
    let summary = run_experiment(&spec)?;
    write_summary_csv(&summary, std::io::stdout()).expect("stdout");
    println!("mse = {:?}", summary.mse);
    if let Some(dir) = std::env::args().nth(1) {
        export_all(&summary, dir.as_ref())?;
    }
    Ok(())
}
