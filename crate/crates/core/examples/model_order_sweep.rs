//! Uniform-prior forecasters of fixed order h = 0..=8 on the XOR process.

use ctah::harness::{sweep, AlgorithmSpec, ExperimentConfig, ProcessSpec};
use ctah::PriorKind;

fn main() -> ctah::Result<()> {
    let base = ExperimentConfig::new(AlgorithmSpec::Ctah, PriorKind::Uniform, 8, 1500, ProcessSpec::Xor3).with_reps(20);
    println!("h   loss/T   pi_hat   pi*     H_T - T pi*");
    for r in sweep(&base)? {
        println!(
            "{}   {:.4}   {:.4}   {:.4}  {:>8.2}",
            r.order,
            r.mean_loss_rate,
            r.mean_pi_hat,
            r.pi_star.unwrap(),
            r.mean_estimation.unwrap()
        );
    }
    Ok(())
}
