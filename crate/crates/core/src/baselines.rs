//! Comparison forecasters: Follow-the-Context-Leader and the fixed-rate
//! tree-expert forecaster.

use crate::context::{ContextStatsTable, ContextWindow, Symbol};
use crate::error::{Error, Result};
use crate::forecaster::{self, Prediction};
use crate::prior::PriorSpec;

/// How Follow-the-Context-Leader resolves equal losses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    /// Split mass evenly.
    #[default]
    Uniform,
    /// Predict 0.
    PredictZero,
}

/// Default rate for the fixed-rate baseline.
pub const DEFAULT_FIXED_ETA: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub enum BaselineKind {
    FollowLeader { order: usize, ties: TieRule },
    FixedEta { eta: f64 },
}

/// Puts all mass on the symbol with the smaller loss at the current
/// length-`h` context.
pub fn ftl_predict(stats: &ContextStatsTable, context: &ContextWindow, h: usize, ties: TieRule) -> Result<Prediction> {
    if h > stats.depth() || h > context.depth() {
        return Err(Error::Usage(format!(
            "leader order {h} exceeds depth {}",
            stats.depth().min(context.depth())
        )));
    }
    let counts = stats.loss_counts(h, context.suffix_key(h))?;
    Ok(match counts.loss_predict_0.cmp(&counts.loss_predict_1) {
        std::cmp::Ordering::Less => Prediction::point(Symbol::Zero),
        std::cmp::Ordering::Greater => Prediction::point(Symbol::One),
        std::cmp::Ordering::Equal => match ties {
            TieRule::Uniform => Prediction::UNIFORM,
            TieRule::PredictZero => Prediction::point(Symbol::Zero),
        },
    })
}

/// Tree-expert exponential weights at a constant learning rate.
pub fn fixed_eta_predict(
    stats: &ContextStatsTable,
    context: &ContextWindow,
    eta: f64,
    prior: &PriorSpec,
) -> Result<Prediction> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::Config(format!(
            "fixed learning rate must be finite and positive, got {eta}"
        )));
    }
    forecaster::predict(stats, context, eta, prior)
}
