//! The context-tree AdaHedge forecaster.
//!
//! Instead of weighting all `2^{2^D}` tree experts, the prediction is
//! computed from per-context loss counts by the distributive law:
//!
//! ```text
//! w_y ∝ Σ_h g(h) · Π_{x(h) != X_t(h)} (Σ_y' e^{-η L_{x(h),y'}}) · e^{-η L_{X_t(h),y}}
//! ```
//!
//! and the model-order posterior is `q(h) ∝ g(h) · Π_{x(h)} Σ_y e^{-η L_{x(h),y}}`.
//! Every level's product is recomputed each round because `η` changes, so
//! one prediction visits `2^{D+1} - 1` context slots.
//!
//! `η = +∞` (the first rounds, while the cumulative mixability gap is zero)
//! is evaluated exactly in the limit semiring of [`crate::weights`].

use crate::context::{ContextStatsTable, ContextWindow, Symbol};
use crate::error::{Error, Result};
use crate::prior::PriorSpec;
use crate::rate::{round_losses, HedgeState, RoundLosses};
use crate::weights::{LimitDomain, LimitWeight, LogDomain, WeightAlgebra};

/// Predictive distribution over the next symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub w0: f64,
    pub w1: f64,
}

impl Prediction {
    pub const UNIFORM: Prediction = Prediction { w0: 0.5, w1: 0.5 };

    pub fn point(y: Symbol) -> Self {
        match y {
            Symbol::Zero => Prediction { w0: 1.0, w1: 0.0 },
            Symbol::One => Prediction { w0: 0.0, w1: 1.0 },
        }
    }

    #[inline]
    pub fn prob(&self, y: Symbol) -> f64 {
        match y {
            Symbol::Zero => self.w0,
            Symbol::One => self.w1,
        }
    }

    /// Expected 0/1 loss against `outcome`.
    #[inline]
    pub fn expected_loss(&self, outcome: Symbol) -> f64 {
        self.prob(outcome.flip())
    }

    /// Sup-norm distance.
    pub fn distance(&self, other: &Prediction) -> f64 {
        (self.w0 - other.w0).abs().max((self.w1 - other.w1).abs())
    }

    fn from_probs(p: &[f64]) -> Self {
        Prediction { w0: p[0], w1: p[1] }
    }
}

/// Posterior over model orders `q(0..=D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPosterior {
    pub q: Vec<f64>,
}

impl ModelPosterior {
    /// Order with the largest posterior mass (lowest order on ties).
    pub fn map_order(&self) -> usize {
        self.q
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (h, &p)| {
                if p > best.1 {
                    (h, p)
                } else {
                    best
                }
            })
            .0
    }
}

/// Unnormalized log evidence `ln Q(h) = ln g(h) + Σ_{x(h)} ln Σ_y e^{-η L}` per level.
#[derive(Debug, Clone, PartialEq)]
pub enum LevelEvidence {
    /// Finite `η`: natural logs.
    Log(Vec<f64>),
    /// `η = +∞`: limit-semiring weights.
    Limit(Vec<LimitWeight>),
}

struct Evaluation {
    prediction: Option<[f64; 2]>,
    evidence: Vec<f64>,
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 {
        Ok(())
    } else {
        Err(Error::Usage(format!("learning rate must be positive, got {eta}")))
    }
}

fn check_shapes(stats: &ContextStatsTable, prior: &PriorSpec) -> Result<()> {
    if stats.depth() != prior.depth() {
        return Err(Error::Usage(format!(
            "prior depth {} does not match table depth {}",
            prior.depth(),
            stats.depth()
        )));
    }
    Ok(())
}

/// Per level: product over all contexts except `skip` of `Σ_y e^{-η L}`,
/// plus the current context's own pair.
fn level_pass<A: WeightAlgebra>(
    alg: &A,
    stats: &ContextStatsTable,
    context: Option<&ContextWindow>,
    prior: &PriorSpec,
) -> (Vec<A::W>, Option<[A::W; 2]>) {
    let mut evidence = Vec::with_capacity(stats.depth() + 1);
    let mut score = context.map(|_| [alg.zero(), alg.zero()]);
    for (h, &log_g) in prior.log_g().iter().enumerate() {
        let level = stats.level(h).expect("h within depth");
        let skip = context.map(|c| c.suffix_key(h) as usize);
        let mut others = alg.one();
        for (key, counts) in level.iter().enumerate() {
            if Some(key) == skip {
                continue;
            }
            let local = alg.add(alg.loss(counts.loss_predict_0), alg.loss(counts.loss_predict_1));
            others = alg.mul(others, local);
        }
        let weight = alg.mul(alg.constant(log_g), others);
        match (skip, score.as_mut()) {
            (Some(k), Some(score)) => {
                let cur = level[k];
                let l0 = alg.loss(cur.loss_predict_0);
                let l1 = alg.loss(cur.loss_predict_1);
                score[0] = alg.add(score[0], alg.mul(weight, l0));
                score[1] = alg.add(score[1], alg.mul(weight, l1));
                evidence.push(alg.mul(weight, alg.add(l0, l1)));
            }
            _ => evidence.push(weight),
        }
    }
    (evidence, score)
}

fn evaluate<A: WeightAlgebra>(
    alg: &A,
    stats: &ContextStatsTable,
    context: Option<&ContextWindow>,
    prior: &PriorSpec,
) -> Evaluation {
    let (evidence, score) = level_pass(alg, stats, context, prior);
    Evaluation {
        prediction: score.map(|s| {
            let p = alg.normalize(&s);
            [p[0], p[1]]
        }),
        evidence: alg.normalize(&evidence),
    }
}

fn evaluate_at(
    stats: &ContextStatsTable,
    context: Option<&ContextWindow>,
    eta: f64,
    prior: &PriorSpec,
) -> Result<Evaluation> {
    check_eta(eta)?;
    check_shapes(stats, prior)?;
    if let Some(c) = context {
        if c.depth() != stats.depth() {
            return Err(Error::Usage(format!(
                "context depth {} does not match table depth {}",
                c.depth(),
                stats.depth()
            )));
        }
    }
    Ok(if eta == f64::INFINITY {
        evaluate(&LimitDomain, stats, context, prior)
    } else {
        evaluate(&LogDomain { eta }, stats, context, prior)
    })
}

/// Predictive distribution for the next outcome under `context`.
pub fn predict(
    stats: &ContextStatsTable,
    context: &ContextWindow,
    eta: f64,
    prior: &PriorSpec,
) -> Result<Prediction> {
    let e = evaluate_at(stats, Some(context), eta, prior)?;
    Ok(Prediction::from_probs(&e.prediction.expect("context given")))
}

/// Posterior over model orders.
pub fn model_posterior(
    stats: &ContextStatsTable,
    eta: f64,
    prior: &PriorSpec,
) -> Result<ModelPosterior> {
    let e = evaluate_at(stats, None, eta, prior)?;
    Ok(ModelPosterior { q: e.evidence })
}

/// Prediction and model posterior from a single pass over the table.
pub fn predict_with_posterior(
    stats: &ContextStatsTable,
    context: &ContextWindow,
    eta: f64,
    prior: &PriorSpec,
) -> Result<(Prediction, ModelPosterior)> {
    let e = evaluate_at(stats, Some(context), eta, prior)?;
    Ok((
        Prediction::from_probs(&e.prediction.expect("context given")),
        ModelPosterior { q: e.evidence },
    ))
}

/// Unnormalized per-level evidence `ln Q(h)`.
pub fn level_evidence(stats: &ContextStatsTable, eta: f64, prior: &PriorSpec) -> Result<LevelEvidence> {
    check_eta(eta)?;
    check_shapes(stats, prior)?;
    Ok(if eta == f64::INFINITY {
        LevelEvidence::Limit(level_pass(&LimitDomain, stats, None, prior).0)
    } else {
        LevelEvidence::Log(level_pass(&LogDomain { eta }, stats, None, prior).0)
    })
}

/// Context slots touched per round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PerRoundCost {
    /// Slots read by one prediction: `Σ_{h=0}^{D} 2^h`.
    pub predict_slots: u64,
    /// Slots written by one record: one per level.
    pub record_slots: u64,
}

pub fn per_round_cost(depth: usize) -> PerRoundCost {
    PerRoundCost {
        predict_slots: (1u64 << (depth + 1)) - 1,
        record_slots: depth as u64 + 1,
    }
}

/// A prediction issued before the outcome of round `round` is known.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    pub round: u64,
    pub eta: f64,
    pub prediction: Prediction,
    pub posterior: ModelPosterior,
}

/// Everything observed in one round of [`ContextTreeAdaHedge::step`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// Round index `t`, starting at 1.
    pub round: u64,
    /// Learning rate used for this round, `η_t`.
    pub eta: f64,
    pub prediction: Prediction,
    pub posterior: ModelPosterior,
    pub losses: RoundLosses,
    /// Clamped mixability gap `δ_t`.
    pub delta: f64,
}

/// Run state of one forecaster: loss table, rate accumulators, prior.
#[derive(Debug, Clone)]
pub struct ContextTreeAdaHedge {
    prior: PriorSpec,
    stats: ContextStatsTable,
    hedge: HedgeState,
}

impl ContextTreeAdaHedge {
    pub fn new(prior: PriorSpec) -> Result<Self> {
        let stats = ContextStatsTable::new(prior.depth())?;
        Ok(Self {
            prior,
            stats,
            hedge: HedgeState::fresh(),
        })
    }

    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }

    pub fn stats(&self) -> &ContextStatsTable {
        &self.stats
    }

    pub fn hedge(&self) -> &HedgeState {
        &self.hedge
    }

    pub fn depth(&self) -> usize {
        self.stats.depth()
    }

    /// Prediction for the coming round without changing any state.
    pub fn predict(&self, context: &ContextWindow) -> Result<Prediction> {
        predict(&self.stats, context, self.hedge.eta(), &self.prior)
    }

    pub fn posterior(&self) -> Result<ModelPosterior> {
        model_posterior(&self.stats, self.hedge.eta(), &self.prior)
    }

    /// Prediction and posterior for the coming round at the current rate.
    pub fn forecast(&self, context: &ContextWindow) -> Result<Forecast> {
        let eta = self.hedge.eta();
        let (prediction, posterior) = predict_with_posterior(&self.stats, context, eta, &self.prior)?;
        Ok(Forecast {
            round: self.hedge.round() + 1,
            eta,
            prediction,
            posterior,
        })
    }

    /// Scores `forecast` against `outcome`, records it and advances the rate.
    /// The forecast must come from [`forecast`](Self::forecast) on the
    /// current state.
    pub fn update(&mut self, context: &ContextWindow, forecast: Forecast, outcome: Symbol) -> Result<StepRecord> {
        if forecast.round != self.hedge.round() + 1 {
            return Err(Error::Usage(format!(
                "forecast for round {} applied at round {}",
                forecast.round,
                self.hedge.round() + 1
            )));
        }
        let losses = round_losses(&forecast.prediction, outcome, forecast.eta)?;
        let delta = self.hedge.advance(losses)?;
        self.stats.record(context, outcome)?;
        Ok(StepRecord {
            round: forecast.round,
            eta: forecast.eta,
            prediction: forecast.prediction,
            posterior: forecast.posterior,
            losses,
            delta,
        })
    }

    /// Plays one round: predict from rounds `1..t-1` at `η_t`, then record
    /// the outcome and advance the rate.
    pub fn step(&mut self, context: &ContextWindow, outcome: Symbol) -> Result<StepRecord> {
        let f = self.forecast(context)?;
        self.update(context, f, outcome)
    }
}
