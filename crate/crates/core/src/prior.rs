//! Prior functions `g` over model orders.
//!
//! A tree expert of order `k` in `F_D` receives prior mass
//! `Σ_{h=k}^{D} g(h) / Z(g)` with `Z(g) = Σ_h 2^{2^h} g(h)`. All values are
//! kept as natural logs since `g_prop` reaches `2^{-2^{D+1}}`.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::weights::log_sum_exp;

/// Which built-in or custom prior to use.
#[derive(Debug, Clone, PartialEq)]
pub enum PriorKind {
    /// `g(h) = 1[h = D]`: plain exponential weights over `F_D`.
    Uniform,
    /// `g(h) = 2^{-2^{h+1}}`.
    Proportional,
    /// Arbitrary nonnegative `g(0..=D)`.
    Table(Vec<f64>),
}

impl PriorKind {
    pub fn name(&self) -> &'static str {
        match self {
            PriorKind::Uniform => "uniform",
            PriorKind::Proportional => "prop",
            PriorKind::Table(_) => "table",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriorSpec {
    depth: usize,
    kind: PriorKind,
    log_g: Vec<f64>,
    log_z: f64,
}

/// `ln(2^{2^h})`.
#[inline]
pub(crate) fn log_class_size(h: usize) -> f64 {
    (1u64 << h) as f64 * LN_2
}

impl PriorSpec {
    pub fn new(kind: PriorKind, depth: usize) -> Result<Self> {
        let log_g: Vec<f64> = match &kind {
            PriorKind::Uniform => (0..=depth)
                .map(|h| if h == depth { 0.0 } else { f64::NEG_INFINITY })
                .collect(),
            PriorKind::Proportional => (0..=depth)
                .map(|h| -((1u64 << (h + 1)) as f64) * LN_2)
                .collect(),
            PriorKind::Table(g) => {
                if g.len() != depth + 1 {
                    return Err(Error::Config(format!(
                        "prior table has {} entries, expected {}",
                        g.len(),
                        depth + 1
                    )));
                }
                if let Some(bad) = g.iter().find(|v| !v.is_finite() || **v < 0.0) {
                    return Err(Error::Config(format!(
                        "prior table entries must be finite and nonnegative, got {bad}"
                    )));
                }
                g.iter().map(|v| v.ln()).collect()
            }
        };
        if log_g.iter().all(|l| *l == f64::NEG_INFINITY) {
            return Err(Error::Config("prior table is all zero".into()));
        }
        let log_z = log_sum_exp(
            log_g
                .iter()
                .enumerate()
                .map(|(h, lg)| lg + log_class_size(h)),
        );
        Ok(Self {
            depth,
            kind,
            log_g,
            log_z,
        })
    }

    pub fn uniform(depth: usize) -> Self {
        Self::new(PriorKind::Uniform, depth).expect("uniform prior is well formed")
    }

    pub fn proportional(depth: usize) -> Self {
        Self::new(PriorKind::Proportional, depth).expect("proportional prior is well formed")
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn kind(&self) -> &PriorKind {
        &self.kind
    }

    /// `ln g(h)` for `h in 0..=D`; `-inf` where `g(h) = 0`.
    #[inline]
    pub fn log_g(&self) -> &[f64] {
        &self.log_g
    }

    /// `ln Z(g)`.
    #[inline]
    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    /// `ln(Σ_{h=k}^{D} g(h)) - ln Z(g)`: log prior mass of one order-`k` expert.
    pub fn log_expert_mass(&self, order: usize) -> f64 {
        log_sum_exp(self.log_g[order..].iter().copied()) - self.log_z
    }

    /// Prior on model orders at `t = 0`: `2^{2^h} g(h) / Z(g)`.
    pub fn order_marginal(&self) -> Vec<f64> {
        self.log_g
            .iter()
            .enumerate()
            .map(|(h, lg)| (lg + log_class_size(h) - self.log_z).exp())
            .collect()
    }

    /// A copy restricted to depth `h` (used when sweeping model orders).
    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        match &self.kind {
            PriorKind::Table(_) => Err(Error::Config(
                "custom prior tables are tied to a single depth".into(),
            )),
            kind => Self::new(kind.clone(), depth),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn proportional_values() {
        let p = PriorSpec::proportional(2);
        let g: Vec<f64> = p.log_g().iter().map(|l| l.exp()).collect();
        assert_relative_eq!(g[0], 0.25);
        assert_relative_eq!(g[1], 1.0 / 16.0);
        assert_relative_eq!(g[2], 1.0 / 256.0);
        assert_relative_eq!(p.log_z().exp(), 13.0 / 16.0, max_relative = 1e-14);
    }

    #[test]
    fn uniform_values() {
        let p = PriorSpec::uniform(2);
        assert_eq!(p.log_g()[..2], [f64::NEG_INFINITY, f64::NEG_INFINITY]);
        assert_eq!(p.log_g()[2], 0.0);
        assert_relative_eq!(p.log_z().exp(), 16.0);
        assert_eq!(p.order_marginal(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn table_errors() {
        assert!(matches!(
            PriorSpec::new(PriorKind::Table(vec![0.0, 0.0]), 1),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            PriorSpec::new(PriorKind::Table(vec![1.0]), 1),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            PriorSpec::new(PriorKind::Table(vec![1.0, -1.0]), 1),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn expert_masses_sum_to_one() {
        // #experts of order exactly k in F_D is 2^{2^k} - 2^{2^{k-1}} (k >= 1), 2 for k = 0.
        for depth in 0..=4 {
            for p in [
                PriorSpec::uniform(depth),
                PriorSpec::proportional(depth),
                PriorSpec::new(PriorKind::Table(vec![1.0; depth + 1]), depth).unwrap(),
            ] {
                let total: f64 = (0..=depth)
                    .map(|k| {
                        let count = if k == 0 {
                            2.0
                        } else {
                            2f64.powi(1 << k) - 2f64.powi(1 << (k - 1))
                        };
                        count * p.log_expert_mass(k).exp()
                    })
                    .sum();
                assert_relative_eq!(total, 1.0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn large_depth_does_not_underflow() {
        let p = PriorSpec::proportional(20);
        assert!(p.log_g()[20].is_finite());
        assert!(p.log_z().is_finite());
        let m = p.order_marginal();
        assert_relative_eq!(m.iter().sum::<f64>(), 1.0, max_relative = 1e-12);
    }
}
