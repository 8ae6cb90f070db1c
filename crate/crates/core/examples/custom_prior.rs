//! Model-order posterior under three priors after the same data.

use ctah::processes::{xor3_spec, StochasticStream};
use ctah::{ContextTreeAdaHedge, PriorKind, PriorSpec};

fn main() -> ctah::Result<()> {
    let depth = 5;
    let priors = [
        PriorKind::Proportional,
        PriorKind::Uniform,
        PriorKind::Table(vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
    ];
    for kind in priors {
        let name = kind.name();
        let prior = PriorSpec::new(kind, depth)?;
        let mass: Vec<String> = prior.order_marginal().iter().map(|m| format!("{m:.3}")).collect();
        let mut f = ContextTreeAdaHedge::new(prior)?;
        for (c, y) in StochasticStream::new(xor3_spec(depth)?, 3).take(600) {
            f.step(&c, y)?;
        }
        let q: Vec<String> = f.posterior()?.q.iter().map(|x| format!("{x:.3}")).collect();
        println!("{name:<8} order mass at t=0 [{}]", mass.join(" "));
        println!("{:<8} posterior at t=600 [{}]", "", q.join(" "));
    }
    Ok(())
}
