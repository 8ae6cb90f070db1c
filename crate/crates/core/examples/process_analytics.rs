//! Population quantities of the built-in processes next to their
//! empirical estimates.

use ctah::processes::{analytics, generate_stochastic, iid07_spec, xor3_spec};
use ctah::ContextStatsTable;

fn main() -> ctah::Result<()> {
    for (name, spec) in [("xor3", xor3_spec(5)?), ("iid07", iid07_spec(5)?)] {
        let a = analytics(&spec);
        let seq = generate_stochastic(&spec, 100_000, 1)?;
        let mut stats = ContextStatsTable::new(5)?;
        for (c, y) in &seq {
            stats.record(c, *y)?;
        }
        println!("{name}: beta* = {:.2}", a.beta_star);
        for h in 0..=5 {
            println!("  h={h}  pi*={:.4}  pi_hat={:.4}", a.pi_star[h], stats.estimated_unpredictability(h)?);
        }
    }
    Ok(())
}
