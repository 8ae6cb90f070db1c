//! Experiment runner: drives a forecaster against a process and records a
//! per-round trace.

use std::sync::Arc;

use rayon::prelude::*;

use super::bounds::{final_checks, BoundVerdict, InvariantTracker, SandwichTracker};
use super::config::{AlgorithmSpec, ExperimentConfig, ProcessSpec};
use crate::baselines::{fixed_eta_predict, ftl_predict, TieRule};
use crate::context::{ContextStatsTable, ContextWindow, Symbol};
use crate::error::{Error, Result};
use crate::forecaster::{level_evidence, model_posterior, ContextTreeAdaHedge, ModelPosterior, Prediction};
use crate::prior::{PriorKind, PriorSpec};
use crate::processes::{iid07_spec, read_sequence, xor3_spec, AdaptiveAdversary, BitSource, StochasticSpec, StochasticStream};
use crate::rate::{round_losses, HedgeState};

/// Offset between a repetition's process seed and its prediction-sampling seed.
pub const SAMPLING_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

/// One row of a run trace, written after round `t` is recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: u64,
    /// Loss charged this round: `w(1 - y)`-style expected loss, or the 0/1
    /// loss of the sampled symbol in sampled mode.
    pub expected_loss: f64,
    pub cumulative_loss: f64,
    pub eta: f64,
    pub delta: f64,
    pub cumulative_delta: f64,
    pub variance: f64,
    pub cumulative_variance: f64,
    /// Posterior over orders used for this round's prediction.
    pub q: Vec<f64>,
    /// `cumulative_loss - best_order_loss(d)` for `d in 0..=D`.
    pub regret: Vec<f64>,
}

/// Result of one repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub rep: usize,
    pub seed: u64,
    pub rows: Vec<TraceRow>,
    /// Per-round invariants, plus bound checks for the adaptive forecaster.
    pub verdicts: Vec<BoundVerdict>,
    /// `π̂_h(T)` for `h in 0..=D`.
    pub pi_hat: Vec<f64>,
}

impl RunResult {
    pub fn final_row(&self) -> &TraceRow {
        self.rows.last().expect("horizon >= 1")
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Per-round mean and sample standard deviation across repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub t: u64,
    pub mean_loss: f64,
    pub sd_loss: f64,
    pub mean_regret: Vec<f64>,
    pub sd_regret: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub runs: Vec<RunResult>,
    pub aggregate: Vec<AggregateRow>,
}

impl Experiment {
    pub fn passed(&self) -> bool {
        self.runs.iter().all(RunResult::passed)
    }

    /// First failing check, as `(rep, verdict)`.
    pub fn first_failure(&self) -> Option<(usize, &BoundVerdict)> {
        self.runs
            .iter()
            .find_map(|r| r.verdicts.iter().find(|v| !v.passed).map(|v| (r.rep, v)))
    }
}

/// Source of contexts and outcomes for one repetition.
enum Environment {
    Stream(StochasticStream),
    Replay {
        seq: Arc<Vec<(ContextWindow, Symbol)>>,
        pos: usize,
    },
    Adversary(AdaptiveAdversary),
}

impl Environment {
    fn context(&self) -> ContextWindow {
        match self {
            Environment::Stream(s) => s.context(),
            Environment::Replay { seq, pos } => seq[*pos].0,
            Environment::Adversary(a) => a.context(),
        }
    }

    fn outcome(&mut self, w: &Prediction) -> Symbol {
        match self {
            Environment::Stream(s) => s.draw_outcome(),
            Environment::Replay { seq, pos } => {
                let y = seq[*pos].1;
                *pos += 1;
                y
            }
            Environment::Adversary(a) => a.respond(w),
        }
    }
}

/// A process with everything that does not depend on the seed resolved.
#[derive(Debug, Clone)]
pub enum ResolvedProcess {
    Stochastic(StochasticSpec),
    Sequence(Arc<Vec<(ContextWindow, Symbol)>>),
    Adversary,
}

impl ResolvedProcess {
    /// Resolves `spec` for forecasters of depth up to `depth`. Stochastic
    /// contexts are generated at `max(depth, true order)` and truncated.
    pub fn resolve(spec: &ProcessSpec, depth: usize) -> Result<Self> {
        Ok(match spec {
            ProcessSpec::Xor3 => ResolvedProcess::Stochastic(xor3_spec(depth.max(3))?),
            ProcessSpec::Iid07 => ResolvedProcess::Stochastic(iid07_spec(depth)?),
            ProcessSpec::File(p) => {
                let seq = read_sequence(p)?;
                match seq.first() {
                    None => return Err(Error::Config(format!("{} holds no rounds", p.display()))),
                    Some((c, _)) if c.depth() < depth => {
                        return Err(Error::Config(format!(
                            "{} has context depth {} but depth {depth} was requested",
                            p.display(),
                            c.depth()
                        )))
                    }
                    _ => {}
                }
                ResolvedProcess::Sequence(Arc::new(seq))
            }
            ProcessSpec::Adversary => ResolvedProcess::Adversary,
        })
    }

    fn environment(&self, depth: usize, seed: u64) -> Result<Environment> {
        Ok(match self {
            ResolvedProcess::Stochastic(spec) => Environment::Stream(StochasticStream::new(spec.clone(), seed)),
            ResolvedProcess::Sequence(seq) => Environment::Replay {
                seq: Arc::clone(seq),
                pos: 0,
            },
            ResolvedProcess::Adversary => Environment::Adversary(AdaptiveAdversary::new(depth, seed)?),
        })
    }

    /// Rounds available; `None` when unbounded.
    pub fn length(&self) -> Option<usize> {
        match self {
            ResolvedProcess::Sequence(s) => Some(s.len()),
            _ => None,
        }
    }
}

struct RoundOutput {
    eta: f64,
    prediction: Prediction,
    posterior: ModelPosterior,
}

enum Player {
    Ctah {
        forecaster: ContextTreeAdaHedge,
        sandwich: Option<SandwichTracker>,
    },
    Leader {
        order: usize,
        ties: TieRule,
        stats: ContextStatsTable,
        hedge: HedgeState,
    },
    Fixed {
        eta: f64,
        prior: PriorSpec,
        stats: ContextStatsTable,
        hedge: HedgeState,
    },
}

impl Player {
    fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let prior = PriorSpec::new(cfg.prior.clone(), cfg.depth)?;
        let stats = ContextStatsTable::new(cfg.depth)?;
        Ok(match cfg.algorithm {
            AlgorithmSpec::Ctah => Player::Ctah {
                sandwich: (*prior.kind() == PriorKind::Proportional).then(SandwichTracker::default),
                forecaster: ContextTreeAdaHedge::new(prior)?,
            },
            AlgorithmSpec::Ftl(order) => Player::Leader {
                order,
                ties: cfg.ftl_ties,
                stats,
                hedge: HedgeState::fresh(),
            },
            AlgorithmSpec::FixedEta(eta) => Player::Fixed {
                eta,
                prior,
                stats,
                hedge: HedgeState::fresh(),
            },
        })
    }

    fn stats(&self) -> &ContextStatsTable {
        match self {
            Player::Ctah { forecaster, .. } => forecaster.stats(),
            Player::Leader { stats, .. } | Player::Fixed { stats, .. } => stats,
        }
    }

    fn hedge(&self) -> &HedgeState {
        match self {
            Player::Ctah { forecaster, .. } => forecaster.hedge(),
            Player::Leader { hedge, .. } | Player::Fixed { hedge, .. } => hedge,
        }
    }

    fn play(&mut self, ctx: &ContextWindow, outcome_of: impl FnOnce(&Prediction) -> Symbol) -> Result<(RoundOutput, Symbol, f64)> {
        match self {
            Player::Ctah { forecaster, sandwich } => {
                if let Some(tracker) = sandwich.as_mut() {
                    let eta = forecaster.hedge().eta();
                    let ev = level_evidence(forecaster.stats(), eta, forecaster.prior())?;
                    tracker.observe(forecaster.hedge().round() + 1, eta, forecaster.stats(), forecaster.prior(), &ev);
                }
                let f = forecaster.forecast(ctx)?;
                let y = outcome_of(&f.prediction);
                let rec = forecaster.update(ctx, f, y)?;
                Ok((
                    RoundOutput {
                        eta: rec.eta,
                        prediction: rec.prediction,
                        posterior: rec.posterior,
                    },
                    y,
                    rec.delta,
                ))
            }
            Player::Leader { order, ties, stats, hedge } => {
                let w = ftl_predict(stats, ctx, *order, *ties)?;
                let mut q = vec![0.0; stats.depth() + 1];
                q[*order] = 1.0;
                let y = outcome_of(&w);
                let delta = hedge.advance(round_losses(&w, y, f64::INFINITY)?)?;
                stats.record(ctx, y)?;
                Ok((
                    RoundOutput {
                        eta: f64::INFINITY,
                        prediction: w,
                        posterior: ModelPosterior { q },
                    },
                    y,
                    delta,
                ))
            }
            Player::Fixed { eta, prior, stats, hedge } => {
                let w = fixed_eta_predict(stats, ctx, *eta, prior)?;
                let posterior = model_posterior(stats, *eta, prior)?;
                let y = outcome_of(&w);
                let delta = hedge.advance(round_losses(&w, y, *eta)?)?;
                stats.record(ctx, y)?;
                Ok((
                    RoundOutput {
                        eta: *eta,
                        prediction: w,
                        posterior,
                    },
                    y,
                    delta,
                ))
            }
        }
    }

    fn verdicts(&self) -> Vec<BoundVerdict> {
        match self {
            Player::Ctah { forecaster, sandwich } => {
                let mut v = final_checks(forecaster.hedge(), forecaster.stats(), forecaster.prior());
                if let Some(s) = sandwich {
                    v.push(s.verdict());
                }
                v
            }
            _ => Vec::new(),
        }
    }
}

/// Runs repetition `rep` of `cfg` against an already resolved process.
pub fn run_repetition(cfg: &ExperimentConfig, process: &ResolvedProcess, rep: usize) -> Result<RunResult> {
    cfg.validate()?;
    let seed = cfg.seed_for(rep);
    let horizon = process.length().map_or(cfg.horizon, |n| n.min(cfg.horizon));
    let mut env = process.environment(cfg.depth, seed)?;
    let mut player = Player::new(cfg)?;
    let mut sampler = cfg
        .sampled_predictions
        .then(|| BitSource::new(seed.wrapping_add(SAMPLING_SEED_OFFSET)));
    let mut rows = Vec::with_capacity(horizon);
    let mut cumulative = 0.0;
    let mut invariants = InvariantTracker::default();

    for _ in 0..horizon {
        let ctx = env.context().truncate(cfg.depth)?;
        let (out, y, delta) = player.play(&ctx, |w| env.outcome(w))?;
        invariants.observe(
            player.hedge().round(),
            [out.prediction.w0, out.prediction.w1],
            &out.posterior.q,
            out.eta,
            delta,
        );
        let loss = match sampler.as_mut() {
            Some(bits) => {
                let guess = bits.bernoulli(out.prediction.w1);
                if guess == y {
                    0.0
                } else {
                    1.0
                }
            }
            None => out.prediction.expected_loss(y),
        };
        cumulative += loss;
        let stats = player.stats();
        let hedge = player.hedge();
        let regret = (0..=cfg.depth)
            .map(|d| stats.best_order_loss(d).map(|s| cumulative - s as f64))
            .collect::<Result<Vec<_>>>()?;
        rows.push(TraceRow {
            t: hedge.round(),
            expected_loss: loss,
            cumulative_loss: cumulative,
            eta: out.eta,
            delta,
            cumulative_delta: hedge.delta_cum(),
            variance: hedge.variance_cum() - rows.last().map_or(0.0, |r: &TraceRow| r.cumulative_variance),
            cumulative_variance: hedge.variance_cum(),
            q: out.posterior.q,
            regret,
        });
    }

    let stats = player.stats();
    let pi_hat = (0..=cfg.depth)
        .map(|h| stats.estimated_unpredictability(h))
        .collect::<Result<Vec<_>>>()?;
    let mut verdicts = vec![invariants.verdict()];
    verdicts.extend(player.verdicts());
    Ok(RunResult {
        rep,
        seed,
        rows,
        verdicts,
        pi_hat,
    })
}

/// Runs every repetition of `cfg`, in parallel unless `cfg.parallel` is
/// off. Results are in repetition order either way.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Experiment> {
    cfg.validate()?;
    let process = ResolvedProcess::resolve(&cfg.process, cfg.depth)?;
    run_experiment_with(cfg, &process)
}

pub fn run_experiment_with(cfg: &ExperimentConfig, process: &ResolvedProcess) -> Result<Experiment> {
    let runs: Vec<RunResult> = if cfg.parallel {
        (0..cfg.repetitions)
            .into_par_iter()
            .map(|i| run_repetition(cfg, process, i))
            .collect::<Result<_>>()?
    } else {
        (0..cfg.repetitions)
            .map(|i| run_repetition(cfg, process, i))
            .collect::<Result<_>>()?
    };
    let aggregate = aggregate(&runs);
    Ok(Experiment {
        config: cfg.clone(),
        runs,
        aggregate,
    })
}

fn mean_sd(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Folds repetitions round by round, in repetition order.
pub fn aggregate(runs: &[RunResult]) -> Vec<AggregateRow> {
    let Some(first) = runs.first() else {
        return Vec::new();
    };
    let len = runs.iter().map(|r| r.rows.len()).min().unwrap_or(0);
    let orders = first.rows.first().map_or(0, |r| r.regret.len());
    (0..len)
        .map(|i| {
            let (mean_loss, sd_loss) = mean_sd(runs.iter().map(|r| r.rows[i].cumulative_loss));
            let (mean_regret, sd_regret) = (0..orders)
                .map(|d| mean_sd(runs.iter().map(|r| r.rows[i].regret[d])))
                .unzip();
            AggregateRow {
                t: first.rows[i].t,
                mean_loss,
                sd_loss,
                mean_regret,
                sd_regret,
            }
        })
        .collect()
}
