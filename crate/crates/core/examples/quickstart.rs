//! Predict a short binary sequence one round at a time.

use ctah::processes::{xor3_spec, StochasticStream};
use ctah::{ContextTreeAdaHedge, PriorSpec};

fn main() -> ctah::Result<()> {
    let depth = 6;
    let mut forecaster = ContextTreeAdaHedge::new(PriorSpec::proportional(depth))?;
    let stream = StochasticStream::new(xor3_spec(depth)?, 7);

    let mut loss = 0.0;
    for (context, outcome) in stream.take(1000) {
        let rec = forecaster.step(&context, outcome)?;
        loss += rec.prediction.expected_loss(outcome);
        if rec.round % 200 == 0 {
            println!(
                "t={:>4}  P(1)={:.3}  eta={:.3}  MAP order={}  loss/t={:.3}",
                rec.round,
                rec.prediction.w1,
                rec.eta,
                rec.posterior.map_order(),
                loss / rec.round as f64
            );
        }
    }
    let stats = forecaster.stats();
    for h in 0..=depth {
        println!("order {h}: best tree expert loss {}", stats.best_order_loss(h)?);
    }
    Ok(())
}
