//! Context-tree AdaHedge.
//!
//! Online binary prediction that competes with every tree expert (a Boolean
//! function of the last `h` context bits) up to depth `D`, using an
//! exponential-weights update whose learning rate follows AdaHedge and
//! whose prior over model orders can favour simple experts.

pub mod baselines;
pub mod context;
pub mod error;
pub mod forecaster;
pub mod harness;
pub mod oracle;
pub mod prior;
pub mod processes;
pub mod rate;
pub mod weights;

pub use context::{ContextStatsTable, ContextWindow, LossCounts, Symbol, MAX_DEPTH};
pub use error::{Error, Result};
pub use forecaster::{
    model_posterior, predict, ContextTreeAdaHedge, Forecast, ModelPosterior, Prediction, StepRecord,
};
pub use prior::{PriorKind, PriorSpec};
pub use rate::{round_losses, HedgeState, RoundLosses};
