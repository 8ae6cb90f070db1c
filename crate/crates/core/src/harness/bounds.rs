//! Regret-bound checks evaluated on finished and running forecasters.

use std::f64::consts::LN_2;
use std::fmt;

use crate::context::ContextStatsTable;
use crate::prior::{PriorKind, PriorSpec};
use crate::rate::HedgeState;
use crate::weights::LimitWeight;
use crate::forecaster::LevelEvidence;

/// Absolute slack per round allowed on every inequality.
pub const SLACK_PER_ROUND: f64 = 1e-6;
/// Tolerance per round on `H - M = Δ`.
pub const IDENTITY_TOL_PER_ROUND: f64 = 1e-9;

/// Outcome of one inequality check.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundVerdict {
    pub name: String,
    pub passed: bool,
    /// Smallest `bound - value` seen; negative means violated.
    pub margin: f64,
    /// First round at which the check failed.
    pub violating_round: Option<u64>,
}

impl BoundVerdict {
    fn from_margin(name: impl Into<String>, margin: f64, slack: f64, round: u64) -> Self {
        let passed = margin >= -slack;
        Self {
            name: name.into(),
            passed,
            margin,
            violating_round: (!passed).then_some(round),
        }
    }
}

impl fmt::Display for BoundVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} (margin {:.6e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.margin
        )?;
        if let Some(r) = self.violating_round {
            write!(f, " at round {r}")?;
        }
        Ok(())
    }
}

/// `√(V ln 2) + ⅔ ln 2 + 1`.
pub fn delta_bound(variance_cum: f64) -> f64 {
    (variance_cum * LN_2).sqrt() + 2.0 / 3.0 * LN_2 + 1.0
}

/// Second-order regret bound against order `d`.
pub fn second_order_bound(variance_cum: f64, prior: &PriorSpec, d: usize) -> f64 {
    let complexity = 1.0 + (prior.log_z() - prior.log_g()[d]) / LN_2;
    delta_bound(variance_cum) * complexity
}

/// Worst-case bound for the proportional prior.
pub fn worst_case_bound(horizon: u64, d: usize) -> f64 {
    (0.5 * (horizon as f64 * LN_2).sqrt() + 2.0 / 3.0 * LN_2 + 1.0) * (2.0 + 2f64.powi(d as i32 + 1))
}

/// End-of-run checks: `H - M = Δ`, the gap bound, the second-order bound
/// for every order with positive prior mass, and for the proportional prior
/// the worst-case bound.
pub fn final_checks(hedge: &HedgeState, stats: &ContextStatsTable, prior: &PriorSpec) -> Vec<BoundVerdict> {
    let t = hedge.round();
    let slack = SLACK_PER_ROUND * t.max(1) as f64;
    let h = hedge.expected_loss_cum();
    let v = hedge.variance_cum();
    let mut out = Vec::new();

    let identity = h - hedge.mix_loss_cum() - hedge.delta_cum();
    out.push(BoundVerdict::from_margin(
        "identity H-M=Delta",
        IDENTITY_TOL_PER_ROUND * t.max(1) as f64 - identity.abs(),
        0.0,
        t,
    ));
    out.push(BoundVerdict::from_margin(
        "gap Delta<=sqrt(V ln2)+2/3 ln2+1",
        delta_bound(v) - hedge.delta_cum(),
        slack,
        t,
    ));

    let mut margin = f64::INFINITY;
    let mut worst_margin = f64::INFINITY;
    for d in 0..=prior.depth() {
        let regret = h - stats.best_order_loss(d).unwrap_or(0) as f64;
        if prior.log_g()[d].is_finite() {
            margin = margin.min(second_order_bound(v, prior, d) - regret);
        }
        worst_margin = worst_margin.min(worst_case_bound(t, d) - regret);
    }
    out.push(BoundVerdict::from_margin("second-order regret", margin, slack, t));
    if *prior.kind() == PriorKind::Proportional {
        out.push(BoundVerdict::from_margin("worst-case regret", worst_margin, slack, t));
    }
    out
}

/// Per-level evidence sandwich for the proportional prior:
/// `-ηS_h - 2·2^h ln2 <= ln Q(h) <= -ηS_h - 2^h ln2`, where `S_h` is the
/// best order-`h` loss so far. At `η = ∞` the check reads the limit form:
/// exponent `S_h` and, with the prior factor removed, a coefficient in
/// `[0, 2^h ln 2]`.
#[derive(Debug, Clone)]
pub struct SandwichTracker {
    margin: f64,
    violating_round: Option<u64>,
}

impl Default for SandwichTracker {
    fn default() -> Self {
        Self {
            margin: f64::INFINITY,
            violating_round: None,
        }
    }
}

impl SandwichTracker {
    /// Checks the state before round `round` is recorded.
    pub fn observe(&mut self, round: u64, eta: f64, stats: &ContextStatsTable, prior: &PriorSpec, evidence: &LevelEvidence) {
        let tol = 1e-9 * (1.0 + round as f64);
        for h in 0..=prior.depth() {
            let s = stats.best_order_loss(h).unwrap_or(0);
            let size = 2f64.powi(h as i32) * LN_2;
            let m = match evidence {
                LevelEvidence::Log(a) => {
                    let a_h = a[h];
                    let base = -eta * s as f64;
                    (a_h - (base - 2.0 * size)).min((base - size) - a_h)
                }
                LevelEvidence::Limit(a) => {
                    let w: LimitWeight = a[h];
                    let coef = w.log_coef - prior.log_g()[h];
                    if w.exponent != s {
                        -1.0
                    } else {
                        coef.min(size - coef)
                    }
                }
            };
            if m < self.margin {
                self.margin = m;
            }
            if m < -tol && self.violating_round.is_none() {
                self.violating_round = Some(round);
            }
        }
    }

    pub fn verdict(&self) -> BoundVerdict {
        BoundVerdict {
            name: "evidence sandwich".into(),
            passed: self.violating_round.is_none(),
            margin: self.margin,
            violating_round: self.violating_round,
        }
    }
}

/// Tolerance on the normalization of `w` and `q`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Per-round invariants: `w` and `q` sum to one, `δ_t ∈ [0, 1]` after
/// clamping, and `η` never increases.
#[derive(Debug, Clone)]
pub struct InvariantTracker {
    last_eta: f64,
    margin: f64,
    violating_round: Option<u64>,
}

impl Default for InvariantTracker {
    fn default() -> Self {
        Self {
            last_eta: f64::INFINITY,
            margin: f64::INFINITY,
            violating_round: None,
        }
    }
}

impl InvariantTracker {
    pub fn observe(&mut self, round: u64, w: [f64; 2], q: &[f64], eta: f64, delta: f64) {
        let w_err = (w[0] + w[1] - 1.0).abs();
        let q_err = (q.iter().sum::<f64>() - 1.0).abs();
        let m = [
            NORMALIZATION_TOL - w_err,
            NORMALIZATION_TOL - q_err,
            delta,
            1.0 - delta,
            if eta <= self.last_eta { f64::INFINITY } else { -1.0 },
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        let bad = m < 0.0 || w.iter().chain(q).any(|x| !(0.0..=1.0 + NORMALIZATION_TOL).contains(x));
        self.margin = self.margin.min(m);
        if bad && self.violating_round.is_none() {
            self.violating_round = Some(round);
        }
        self.last_eta = eta;
    }

    pub fn verdict(&self) -> BoundVerdict {
        BoundVerdict {
            name: "per-round invariants".into(),
            passed: self.violating_round.is_none(),
            margin: self.margin,
            violating_round: self.violating_round,
        }
    }
}
