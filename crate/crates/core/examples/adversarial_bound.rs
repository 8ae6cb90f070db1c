//! An adaptive adversary always reveals the less likely symbol. Regret
//! keeps growing but stays under the worst-case bound for every order.

use ctah::harness::bounds::worst_case_bound;
use ctah::harness::{run_experiment, AlgorithmSpec, ExperimentConfig, ProcessSpec};
use ctah::PriorKind;

fn main() -> ctah::Result<()> {
    let horizon = 10_000;
    let cfg = ExperimentConfig::new(AlgorithmSpec::Ctah, PriorKind::Proportional, 8, horizon, ProcessSpec::Adversary);
    let exp = run_experiment(&cfg)?;
    let rows = &exp.runs[0].rows;
    for t in [1250, 2500, 5000, 10_000] {
        let row = &rows[t - 1];
        println!("t={t:>5}  H={:.1}  R_0={:.1}  R_3={:.1}  R_8={:.1}", row.cumulative_loss, row.regret[0], row.regret[3], row.regret[8]);
    }
    let last = rows.last().unwrap();
    for d in 0..=8 {
        println!("d={d}  R={:>7.1}  bound {:>8.1}", last.regret[d], worst_case_bound(horizon as u64, d));
    }
    for v in &exp.runs[0].verdicts {
        println!("{v}");
    }
    Ok(())
}
