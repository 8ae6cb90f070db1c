//! Brute-force reference: explicit exponential weights over every tree
//! expert in `F_D`.
//!
//! Each expert is a truth table over the `2^D` full contexts, packed into
//! an integer (bit `k` is the output on context key `k`). The ensemble is
//! only usable for `D <= 4` (`|F_4| = 65536`). It exists to certify the
//! efficient forecaster, so it shares no evaluation code with it.

use crate::context::{ContextWindow, Symbol};
use crate::error::{Error, Result};
use crate::forecaster::{self, Prediction};
use crate::prior::{PriorKind, PriorSpec};
use crate::processes::BitSource;
use crate::rate::{round_losses, HedgeState};

/// Largest depth the naive ensemble accepts.
pub const MAX_ORACLE_DEPTH: usize = 4;

/// A Boolean function of the full depth-`D` context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeExpert {
    depth: usize,
    truth_table: u64,
}

impl TreeExpert {
    pub fn new(depth: usize, truth_table: u64) -> Result<Self> {
        if depth > MAX_ORACLE_DEPTH {
            return Err(Error::Config(format!(
                "tree experts are enumerated only up to depth {MAX_ORACLE_DEPTH}"
            )));
        }
        let entries = 1u32 << depth;
        if entries < 64 && truth_table >> entries != 0 {
            return Err(Error::Usage("truth table wider than 2^depth entries".into()));
        }
        Ok(Self { depth, truth_table })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn truth_table(&self) -> u64 {
        self.truth_table
    }

    #[inline]
    pub fn output(&self, key: u64) -> Symbol {
        Symbol::from_bit((self.truth_table >> key) & 1 == 1)
    }

    /// Smallest `d` such that the output ignores all but the `d` most recent bits.
    pub fn order(&self) -> usize {
        (0..=self.depth)
            .find(|&d| {
                let mask = (1u64 << d) - 1;
                (0..1u64 << self.depth).all(|k| self.output(k) == self.output(k & mask))
            })
            .expect("order D always qualifies")
    }
}

pub fn order_of(expert: &TreeExpert) -> usize {
    expert.order()
}

/// Exponential weights over all of `F_D` with the order-based prior.
#[derive(Debug, Clone)]
pub struct NaiveEnsemble {
    depth: usize,
    experts: Vec<TreeExpert>,
    orders: Vec<usize>,
    log_prior: Vec<f64>,
    cum_loss: Vec<u64>,
    rounds: u64,
}

fn lse(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

impl NaiveEnsemble {
    pub fn new(prior: &PriorSpec) -> Result<Self> {
        let depth = prior.depth();
        if depth > MAX_ORACLE_DEPTH {
            return Err(Error::Config(format!(
                "naive ensemble supports depth <= {MAX_ORACLE_DEPTH}, got {depth}"
            )));
        }
        let count = 1u64 << (1u32 << depth);
        let experts: Vec<TreeExpert> = (0..count)
            .map(|tt| TreeExpert::new(depth, tt).expect("in range"))
            .collect();
        let orders: Vec<usize> = experts.iter().map(TreeExpert::order).collect();
        // Z(g) by brute force: Σ_f Σ_{h >= order(f)} g(h).
        let tail = |k: usize| lse(prior.log_g()[k..].iter().copied());
        let tails: Vec<f64> = (0..=depth).map(tail).collect();
        let log_z = lse(orders.iter().map(|&k| tails[k]));
        let log_prior = orders.iter().map(|&k| tails[k] - log_z).collect();
        Ok(Self {
            depth,
            cum_loss: vec![0; experts.len()],
            experts,
            orders,
            log_prior,
            rounds: 0,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn experts(&self) -> &[TreeExpert] {
        &self.experts
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn cum_loss(&self) -> &[u64] {
        &self.cum_loss
    }

    pub fn log_prior(&self) -> &[f64] {
        &self.log_prior
    }

    /// Current distribution over experts at rate `eta` (`+∞` allowed).
    pub fn tree_weights(&self, eta: f64) -> Vec<f64> {
        let logs: Vec<f64> = if eta == f64::INFINITY {
            let best = self.best_supported_loss();
            self.log_prior
                .iter()
                .zip(&self.cum_loss)
                .map(|(&lp, &l)| if l == best { lp } else { f64::NEG_INFINITY })
                .collect()
        } else {
            self.log_prior
                .iter()
                .zip(&self.cum_loss)
                .map(|(&lp, &l)| lp - eta * l as f64)
                .collect()
        };
        let total = lse(logs.iter().copied());
        logs.iter().map(|l| (l - total).exp()).collect()
    }

    fn best_supported_loss(&self) -> u64 {
        self.log_prior
            .iter()
            .zip(&self.cum_loss)
            .filter(|(lp, _)| lp.is_finite())
            .map(|(_, &l)| l)
            .min()
            .unwrap_or(0)
    }

    /// Induced predictive distribution on the current context.
    pub fn predict(&self, context: &ContextWindow, eta: f64) -> Result<Prediction> {
        if context.depth() != self.depth {
            return Err(Error::Usage(format!(
                "context depth {} does not match ensemble depth {}",
                context.depth(),
                self.depth
            )));
        }
        if eta.is_nan() || eta <= 0.0 {
            return Err(Error::Usage(format!("learning rate must be positive, got {eta}")));
        }
        let key = context.key();
        let best = self.best_supported_loss();
        let score = |i: usize| -> f64 {
            let lp = self.log_prior[i];
            let l = self.cum_loss[i];
            if eta == f64::INFINITY {
                if l == best {
                    lp
                } else {
                    f64::NEG_INFINITY
                }
            } else {
                lp - eta * l as f64
            }
        };
        let by_output = |y: Symbol| {
            lse((0..self.experts.len())
                .filter(|&i| self.experts[i].output(key) == y)
                .map(score))
        };
        let (s0, s1) = (by_output(Symbol::Zero), by_output(Symbol::One));
        let m = s0.max(s1);
        let (e0, e1) = ((s0 - m).exp(), (s1 - m).exp());
        Ok(Prediction {
            w0: e0 / (e0 + e1),
            w1: e1 / (e0 + e1),
        })
    }

    pub fn record(&mut self, context: &ContextWindow, outcome: Symbol) -> Result<()> {
        if context.depth() != self.depth {
            return Err(Error::Usage("context depth mismatch".into()));
        }
        let key = context.key();
        for (e, l) in self.experts.iter().zip(self.cum_loss.iter_mut()) {
            if e.output(key) != outcome {
                *l += 1;
            }
        }
        self.rounds += 1;
        Ok(())
    }

    /// Smallest cumulative loss among experts of order at most `d`.
    pub fn best_loss_up_to_order(&self, d: usize) -> u64 {
        self.orders
            .iter()
            .zip(&self.cum_loss)
            .filter(|(&k, _)| k <= d)
            .map(|(_, &l)| l)
            .min()
            .unwrap_or(0)
    }
}

/// Outcome of running the efficient and naive updates side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub depth: usize,
    pub horizon: usize,
    pub seed: u64,
    /// Largest sup-norm gap between the two predictive distributions.
    pub max_deviation: f64,
    /// Round at which it occurred.
    pub worst_round: usize,
    /// Rounds played at `η = +∞`.
    pub infinite_eta_rounds: usize,
}

/// Runs the efficient forecaster on a random sequence and replays its
/// learning rates through the naive ensemble, comparing every round.
pub fn equivalence_check(depth: usize, prior_kind: &PriorKind, horizon: usize, seed: u64) -> Result<EquivalenceReport> {
    if depth > 3 {
        return Err(Error::Config(format!(
            "equivalence check supports depth <= 3, got {depth}"
        )));
    }
    if horizon == 0 || horizon > 200 {
        return Err(Error::Config(format!(
            "equivalence check horizon must be in 1..=200, got {horizon}"
        )));
    }
    let prior = PriorSpec::new(prior_kind.clone(), depth)?;
    let mut fast = forecaster::ContextTreeAdaHedge::new(prior.clone())?;
    let mut naive = NaiveEnsemble::new(&prior)?;
    let mut bits = BitSource::new(seed);
    let mut report = EquivalenceReport {
        depth,
        horizon,
        seed,
        max_deviation: 0.0,
        worst_round: 0,
        infinite_eta_rounds: 0,
    };
    for t in 1..=horizon {
        let key = (0..depth).fold(0u64, |k, i| k | (bits.bernoulli(0.5).index() as u64) << i);
        let context = ContextWindow::from_key(depth, key)?;
        // Skewed outcomes keep the rate finite but not tiny.
        let outcome = bits.bernoulli(if key & 1 == 1 { 0.8 } else { 0.35 });
        let rec = fast.step(&context, outcome)?;
        let slow = naive.predict(&context, rec.eta)?;
        naive.record(&context, outcome)?;
        if rec.eta == f64::INFINITY {
            report.infinite_eta_rounds += 1;
        }
        let dev = rec.prediction.distance(&slow);
        if dev > report.max_deviation || dev.is_nan() {
            report.max_deviation = if dev.is_nan() { f64::INFINITY } else { dev };
            report.worst_round = t;
        }
    }
    Ok(report)
}

/// Plays naive exponential weights with its own AdaHedge rate.
///
/// Used as an end-to-end reference for short runs.
pub fn naive_adahedge_run(prior: &PriorSpec, seq: &[(ContextWindow, Symbol)]) -> Result<(Vec<Prediction>, HedgeState)> {
    let mut naive = NaiveEnsemble::new(prior)?;
    let mut hedge = HedgeState::fresh();
    let mut out = Vec::with_capacity(seq.len());
    for (c, y) in seq {
        let w = naive.predict(c, hedge.eta())?;
        hedge.advance(round_losses(&w, *y, hedge.eta())?)?;
        naive.record(c, *y)?;
        out.push(w);
    }
    Ok((out, hedge))
}
