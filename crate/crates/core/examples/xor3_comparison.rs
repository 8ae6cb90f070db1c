//! Proportional prior, uniform prior and Follow-the-Context-Leader on the
//! third-order XOR process. Writes traces under `target/xor3_comparison`.

use ctah::harness::{run_experiment, write_experiment, AlgorithmSpec, ExperimentConfig, ProcessSpec};
use ctah::PriorKind;

fn main() -> ctah::Result<()> {
    let out = std::path::Path::new("target/xor3_comparison");
    let runs = [
        ("prop", AlgorithmSpec::Ctah, PriorKind::Proportional),
        ("uniform", AlgorithmSpec::Ctah, PriorKind::Uniform),
        ("ftl3", AlgorithmSpec::Ftl(3), PriorKind::Uniform),
    ];
    for (name, alg, prior) in runs {
        let cfg = ExperimentConfig::new(alg, prior, 8, 1500, ProcessSpec::Xor3).with_reps(20);
        let exp = run_experiment(&cfg)?;
        write_experiment(&exp, &out.join(name))?;
        let last = exp.aggregate.last().unwrap();
        let mid = &exp.aggregate[749];
        println!(
            "{name:<8} loss {:>7.2}  R_3(750) {:>7.2}  R_3(1500) {:>7.2}  checks {}",
            last.mean_loss,
            mid.mean_regret[3],
            last.mean_regret[3],
            if exp.passed() { "ok" } else { "FAILED" }
        );
    }
    println!("aggregates in {}", out.display());
    Ok(())
}
