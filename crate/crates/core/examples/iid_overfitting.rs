//! An i.i.d. Bernoulli(0.7) source: the uniform prior spreads mass over
//! 2^256 depth-8 experts and pays for it.

use ctah::harness::{run_experiment, AlgorithmSpec, ExperimentConfig, ProcessSpec};
use ctah::PriorKind;

fn main() -> ctah::Result<()> {
    for (name, alg, prior) in [
        ("ftl(0)", AlgorithmSpec::Ftl(0), PriorKind::Uniform),
        ("prop", AlgorithmSpec::Ctah, PriorKind::Proportional),
        ("uniform", AlgorithmSpec::Ctah, PriorKind::Uniform),
        ("fixed-eta 1", AlgorithmSpec::FixedEta(1.0), PriorKind::Proportional),
    ] {
        let cfg = ExperimentConfig::new(alg, prior, 8, 1500, ProcessSpec::Iid07).with_reps(20);
        let exp = run_experiment(&cfg)?;
        let last = exp.aggregate.last().unwrap();
        println!("{name:<12} mean loss {:>7.2} (sd {:.2})", last.mean_loss, last.sd_loss);
    }
    Ok(())
}
