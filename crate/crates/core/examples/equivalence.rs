//! Efficient update against brute-force enumeration of every tree expert.

use ctah::oracle::equivalence_check;
use ctah::PriorKind;

fn main() -> ctah::Result<()> {
    for depth in 1..=3 {
        for prior in [PriorKind::Uniform, PriorKind::Proportional, PriorKind::Table(vec![1.0; depth + 1])] {
            let r = equivalence_check(depth, &prior, 50, 1)?;
            println!(
                "D={depth} prior={:<7} max deviation {:.3e} (round {}, {} rounds at eta=inf)",
                prior.name(),
                r.max_deviation,
                r.worst_round,
                r.infinite_eta_rounds
            );
        }
    }
    Ok(())
}
