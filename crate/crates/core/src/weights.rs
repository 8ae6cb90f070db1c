//! Weight arithmetic for exponential-weights sums `Σ g · e^{-η L}`.
//!
//! Two representations share one interface:
//!
//! * [`LogDomain`] — finite `η`; a weight is its natural log.
//! * [`LimitDomain`] — the `η → +∞` limit; a weight `b · e^{-η a}` is the
//!   pair `(a, ln b)`. Products add both parts; sums keep the smallest
//!   exponent and add the coefficients of ties.
//!
//! Loss exponents are integer counts, so ties in the limit domain compare
//! exactly.

/// `ln(e^a + e^b)` without overflow. `-inf` is the additive identity.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{x_i}` over an iterator; `-inf` for an empty sum.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Normalizes log-weights into probabilities.
pub fn softmax(logs: &[f64]) -> Vec<f64> {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Semiring operations over exponential weights.
pub trait WeightAlgebra {
    type W: Copy + std::fmt::Debug;

    fn zero(&self) -> Self::W;
    fn one(&self) -> Self::W;
    /// `e^{-η · loss}`.
    fn loss(&self, loss: u64) -> Self::W;
    /// A constant factor given by its log; `-inf` is zero.
    fn constant(&self, log_c: f64) -> Self::W;
    fn mul(&self, a: Self::W, b: Self::W) -> Self::W;
    fn add(&self, a: Self::W, b: Self::W) -> Self::W;
    /// Normalizes a list of weights into probabilities summing to one.
    fn normalize(&self, ws: &[Self::W]) -> Vec<f64>;
}

/// Finite learning rate, weights stored as natural logs.
#[derive(Debug, Clone, Copy)]
pub struct LogDomain {
    pub eta: f64,
}

impl WeightAlgebra for LogDomain {
    type W = f64;

    #[inline]
    fn zero(&self) -> f64 {
        f64::NEG_INFINITY
    }
    #[inline]
    fn one(&self) -> f64 {
        0.0
    }
    #[inline]
    fn loss(&self, loss: u64) -> f64 {
        -self.eta * loss as f64
    }
    #[inline]
    fn constant(&self, log_c: f64) -> f64 {
        log_c
    }
    #[inline]
    fn mul(&self, a: f64, b: f64) -> f64 {
        a + b
    }
    #[inline]
    fn add(&self, a: f64, b: f64) -> f64 {
        log_add_exp(a, b)
    }
    fn normalize(&self, ws: &[f64]) -> Vec<f64> {
        softmax(ws)
    }
}

/// A weight `b · e^{-η a}` in the `η → ∞` limit: exponent `a`, `ln b`.
///
/// The zero weight has `exponent = u64::MAX` and `log_coef = -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitWeight {
    pub exponent: u64,
    pub log_coef: f64,
}

impl LimitWeight {
    pub const ZERO: LimitWeight = LimitWeight {
        exponent: u64::MAX,
        log_coef: f64::NEG_INFINITY,
    };

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.log_coef == f64::NEG_INFINITY
    }
}

/// Infinite learning rate via the limit semiring.
#[derive(Debug, Clone, Copy, Default)]
pub struct LimitDomain;

impl WeightAlgebra for LimitDomain {
    type W = LimitWeight;

    #[inline]
    fn zero(&self) -> LimitWeight {
        LimitWeight::ZERO
    }
    #[inline]
    fn one(&self) -> LimitWeight {
        LimitWeight {
            exponent: 0,
            log_coef: 0.0,
        }
    }
    #[inline]
    fn loss(&self, loss: u64) -> LimitWeight {
        LimitWeight {
            exponent: loss,
            log_coef: 0.0,
        }
    }
    #[inline]
    fn constant(&self, log_c: f64) -> LimitWeight {
        if log_c == f64::NEG_INFINITY {
            LimitWeight::ZERO
        } else {
            LimitWeight {
                exponent: 0,
                log_coef: log_c,
            }
        }
    }
    #[inline]
    fn mul(&self, a: LimitWeight, b: LimitWeight) -> LimitWeight {
        if a.is_zero() || b.is_zero() {
            return LimitWeight::ZERO;
        }
        LimitWeight {
            exponent: a.exponent + b.exponent,
            log_coef: a.log_coef + b.log_coef,
        }
    }
    #[inline]
    fn add(&self, a: LimitWeight, b: LimitWeight) -> LimitWeight {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        match a.exponent.cmp(&b.exponent) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => LimitWeight {
                exponent: a.exponent,
                log_coef: log_add_exp(a.log_coef, b.log_coef),
            },
        }
    }
    fn normalize(&self, ws: &[LimitWeight]) -> Vec<f64> {
        let best = ws
            .iter()
            .filter(|w| !w.is_zero())
            .map(|w| w.exponent)
            .min()
            .unwrap_or(u64::MAX);
        let logs: Vec<f64> = ws
            .iter()
            .map(|w| {
                if !w.is_zero() && w.exponent == best {
                    w.log_coef
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        softmax(&logs)
    }
}
