//! AdaHedge learning-rate recursion.
//!
//! Per round, with prediction `w` and loss vector `l` (`l_y = 1[y != outcome]`):
//!
//! ```text
//! h_t = <w, l>                          expected loss
//! m_t = -(1/η) ln <w, e^{-η l}>         mix loss
//! δ_t = h_t - m_t ∈ [0, 1]              mixability gap
//! v_t = Var_{K ~ w}[l_K] = h_t (1 - h_t)
//! Δ_t = Σ δ_s,    η_{t+1} = ln 2 / Δ_t  (+∞ while Δ_t = 0)
//! ```

use std::f64::consts::LN_2;

use crate::context::Symbol;
use crate::error::{Error, Result};
use crate::forecaster::Prediction;
use crate::weights::log_add_exp;

/// Mixability gaps below zero by more than this are treated as bugs.
pub const GAP_TOLERANCE: f64 = 1e-12;

/// Per-round diagnostic losses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundLosses {
    pub expected_loss: f64,
    pub mix_loss: f64,
    pub variance: f64,
}

impl RoundLosses {
    /// `h_t - m_t`, before clamping.
    #[inline]
    pub fn gap(&self) -> f64 {
        self.expected_loss - self.mix_loss
    }
}

/// Evaluates the round's losses for prediction `w` at learning rate `eta`.
pub fn round_losses(w: &Prediction, outcome: Symbol, eta: f64) -> Result<RoundLosses> {
    if eta.is_nan() || eta <= 0.0 {
        return Err(Error::Usage(format!("learning rate must be positive, got {eta}")));
    }
    let sum = w.w0 + w.w1;
    if (sum - 1.0).abs() > 1e-12 || w.w0 < 0.0 || w.w1 < 0.0 {
        return Err(Error::Usage(format!(
            "prediction ({}, {}) is not a distribution",
            w.w0, w.w1
        )));
    }
    let right = w.prob(outcome);
    let wrong = w.prob(outcome.flip());
    let mix_loss = if eta == f64::INFINITY {
        if right > 0.0 {
            0.0
        } else {
            1.0
        }
    } else if eta <= 1.0 {
        // ln(1 - wrong·(1 - e^{-η})) keeps precision for small η.
        -(-wrong * -(-eta).exp_m1()).ln_1p() / eta
    } else {
        -log_add_exp(right.ln(), wrong.ln() - eta) / eta
    };
    Ok(RoundLosses {
        expected_loss: wrong,
        mix_loss,
        variance: wrong * (1.0 - wrong),
    })
}

/// AdaHedge accumulators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgeState {
    round: u64,
    delta_cum: f64,
    expected_loss_cum: f64,
    mix_loss_cum: f64,
    variance_cum: f64,
    eta_current: f64,
}

impl Default for HedgeState {
    fn default() -> Self {
        Self::fresh()
    }
}

impl HedgeState {
    pub fn fresh() -> Self {
        Self {
            round: 0,
            delta_cum: 0.0,
            expected_loss_cum: 0.0,
            mix_loss_cum: 0.0,
            variance_cum: 0.0,
            eta_current: f64::INFINITY,
        }
    }

    /// Completed rounds `t`.
    pub fn round(&self) -> u64 {
        self.round
    }
    /// `Δ_t`.
    pub fn delta_cum(&self) -> f64 {
        self.delta_cum
    }
    /// `H_t`.
    pub fn expected_loss_cum(&self) -> f64 {
        self.expected_loss_cum
    }
    /// `M_t`.
    pub fn mix_loss_cum(&self) -> f64 {
        self.mix_loss_cum
    }
    /// `V_t`.
    pub fn variance_cum(&self) -> f64 {
        self.variance_cum
    }
    /// Rate for the next round, `η_{t+1}`.
    pub fn eta(&self) -> f64 {
        self.eta_current
    }

    /// Folds one round into the accumulators; returns the clamped gap `δ_t`.
    pub fn advance(&mut self, losses: RoundLosses) -> Result<f64> {
        let raw = losses.gap();
        if raw.is_nan() || raw < -GAP_TOLERANCE {
            return Err(Error::Numerical {
                round: self.round + 1,
                delta: raw,
            });
        }
        let delta = raw.clamp(0.0, 1.0);
        self.round += 1;
        self.delta_cum += delta;
        self.expected_loss_cum += losses.expected_loss;
        self.mix_loss_cum += losses.mix_loss;
        self.variance_cum += losses.variance;
        self.eta_current = if self.delta_cum > 0.0 {
            LN_2 / self.delta_cum
        } else {
            f64::INFINITY
        };
        Ok(delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pred(w0: f64) -> Prediction {
        Prediction { w0, w1: 1.0 - w0 }
    }

    #[test]
    fn fresh_state() {
        let s = HedgeState::fresh();
        assert_eq!(s.eta(), f64::INFINITY);
        assert_eq!(s.delta_cum(), 0.0);
        assert_eq!(s.round(), 0);
    }

    #[test]
    fn half_half_at_ln2() {
        let r = round_losses(&pred(0.5), Symbol::Zero, LN_2).unwrap();
        assert_relative_eq!(r.expected_loss, 0.5);
        // m = -ln(3/4)/ln 2
        assert_relative_eq!(r.mix_loss, 0.415_037_499_278_843_8, epsilon = 1e-12);
        assert_relative_eq!(r.gap(), 0.084_962_500_721_156_2, epsilon = 1e-12);
        assert_relative_eq!(r.variance, 0.25);
    }

    #[test]
    fn no_mass_on_wrong_symbol() {
        for eta in [0.1, 1.0, 50.0, f64::INFINITY] {
            let r = round_losses(&pred(1.0), Symbol::Zero, eta).unwrap();
            assert_eq!((r.expected_loss, r.mix_loss, r.variance), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn infinite_eta_limits() {
        let r = round_losses(&pred(0.5), Symbol::One, f64::INFINITY).unwrap();
        assert_eq!((r.expected_loss, r.mix_loss), (0.5, 0.0));
        assert_eq!(r.gap(), 0.5);
        let r = round_losses(&pred(1.0), Symbol::One, f64::INFINITY).unwrap();
        assert_eq!((r.expected_loss, r.mix_loss), (1.0, 1.0));
        assert_eq!(r.gap(), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(round_losses(&Prediction { w0: 0.7, w1: 0.7 }, Symbol::One, 1.0).is_err());
        assert!(round_losses(&pred(0.5), Symbol::One, 0.0).is_err());
    }

    #[test]
    fn advance_updates_rate() {
        let mut s = HedgeState::fresh();
        let d = s
            .advance(RoundLosses {
                expected_loss: 0.5,
                mix_loss: 0.0,
                variance: 0.25,
            })
            .unwrap();
        assert_eq!(d, 0.5);
        assert_eq!(s.delta_cum(), 0.5);
        assert_relative_eq!(s.eta(), 2.0 * LN_2);
        let eta = s.eta();
        s.advance(RoundLosses {
            expected_loss: 0.0,
            mix_loss: 0.0,
            variance: 0.0,
        })
        .unwrap();
        assert_eq!(s.eta(), eta);
    }

    #[test]
    fn negative_gap_is_an_error() {
        let mut s = HedgeState::fresh();
        let tiny = RoundLosses {
            expected_loss: 0.3,
            mix_loss: 0.3 + 1e-14,
            variance: 0.21,
        };
        assert_eq!(s.advance(tiny).unwrap(), 0.0);
        let broken = RoundLosses {
            expected_loss: 0.3,
            mix_loss: 0.4,
            variance: 0.21,
        };
        assert!(matches!(s.advance(broken), Err(Error::Numerical { .. })));
    }

    #[test]
    fn hundred_rounds_bound_delta() {
        let mut s = HedgeState::fresh();
        for _ in 0..100 {
            s.advance(RoundLosses {
                expected_loss: 1.0,
                mix_loss: 0.0,
                variance: 0.0,
            })
            .unwrap();
        }
        assert!(s.delta_cum() <= 100.0);
        assert!(s.eta() >= LN_2 / 100.0);
    }

    proptest! {
        #[test]
        fn gap_in_unit_interval(w0 in 0.0f64..=1.0, y in any::<bool>(), eta in 1e-6f64..1e6) {
            let r = round_losses(&pred(w0), Symbol::from_bit(y), eta).unwrap();
            prop_assert!(r.gap() >= -GAP_TOLERANCE);
            prop_assert!(r.gap() <= 1.0 + GAP_TOLERANCE);
            prop_assert!(r.mix_loss >= -GAP_TOLERANCE);
        }

        #[test]
        fn rate_nonincreasing(steps in proptest::collection::vec((0.0f64..=1.0, any::<bool>()), 1..60)) {
            let mut s = HedgeState::fresh();
            let mut prev = s.eta();
            for (w0, y) in steps {
                let r = round_losses(&pred(w0), Symbol::from_bit(y), s.eta()).unwrap();
                s.advance(r).unwrap();
                prop_assert!(s.eta() <= prev);
                prev = s.eta();
            }
            let ident = s.expected_loss_cum() - s.mix_loss_cum() - s.delta_cum();
            prop_assert!(ident.abs() <= 1e-9 * s.round() as f64);
        }
    }
}
