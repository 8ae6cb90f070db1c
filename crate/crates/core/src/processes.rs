//! Data generators and their analytic ground truth.
//!
//! Stochastic processes follow the `d`-th order condition: an exogenous
//! i.i.d. covariate bit stream `U_t ~ Ber(covariate_bias)`, context
//! `X_t = (U_{t-D}, ..., U_{t-1})`, and `Y_t ~ Ber(P*(1 | X_t(d)))`. `D`
//! covariate bits are drawn before round 1 so the first context is full.
//!
//! Randomness comes from ChaCha20 seeded through `seed_from_u64`
//! ([`RNG_ID`]). A uniform draw is `(next_u64 >> 11) · 2^-53` and a
//! Bernoulli(`p`) draw is `uniform < p`. Each round consumes one draw for
//! the outcome, then one for the next covariate bit.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::context::{ContextWindow, Symbol};
use crate::error::{Error, Result};
use crate::forecaster::Prediction;

/// Identifier of the generator family written into run summaries.
pub const RNG_ID: &str = "chacha20(rand_core-0.6 seed_from_u64)";

/// Seeded bit source shared by generators and sampled predictions.
#[derive(Debug, Clone)]
pub struct BitSource {
    rng: ChaCha20Rng,
}

impl BitSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bernoulli(&mut self, p: f64) -> Symbol {
        Symbol::from_bit(self.uniform() < p)
    }
}

/// A `d`-th order stochastic source over depth-`D` contexts.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticSpec {
    depth: usize,
    true_order: usize,
    covariate_bias: f64,
    cond_table: Vec<f64>,
}

impl StochasticSpec {
    /// `cond_table[k]` is `P*(Y = 1 | x(d))` for the packed `d`-bit key `k`.
    pub fn new(depth: usize, true_order: usize, covariate_bias: f64, cond_table: Vec<f64>) -> Result<Self> {
        if true_order > depth {
            return Err(Error::Config(format!(
                "true order {true_order} exceeds context depth {depth}"
            )));
        }
        if depth > crate::context::MAX_DEPTH {
            return Err(Error::Config(format!("depth {depth} too large")));
        }
        if cond_table.len() != 1usize << true_order {
            return Err(Error::Config(format!(
                "conditional table needs {} entries, got {}",
                1usize << true_order,
                cond_table.len()
            )));
        }
        if cond_table.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Config("conditional probabilities must lie in [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&covariate_bias) {
            return Err(Error::Config("covariate bias must lie in [0, 1]".into()));
        }
        Ok(Self {
            depth,
            true_order,
            covariate_bias,
            cond_table,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
    pub fn true_order(&self) -> usize {
        self.true_order
    }
    pub fn covariate_bias(&self) -> f64 {
        self.covariate_bias
    }
    pub fn cond_table(&self) -> &[f64] {
        &self.cond_table
    }

    /// `P*(Y = 1 | X_t(d))` for a full context.
    pub fn p_one(&self, context: &ContextWindow) -> f64 {
        self.cond_table[context.suffix_key(self.true_order) as usize]
    }

    /// True when the best `d`-th order predictor is unique (no entry is exactly 1/2).
    pub fn has_margin(&self) -> bool {
        self.cond_table.iter().all(|&p| p != 0.5)
    }

    /// Same process observed through a different context depth.
    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        Self::new(depth, self.true_order, self.covariate_bias, self.cond_table.clone())
    }
}

/// `Y_t ~ Ber(0.6 · (U_{t-3} ⊕ U_{t-2} ⊕ U_{t-1}) + 0.2)`.
pub fn xor3_spec(depth: usize) -> Result<StochasticSpec> {
    if depth < 3 {
        return Err(Error::Config(format!("xor3 needs depth >= 3, got {depth}")));
    }
    let table = (0u32..8)
        .map(|k| if k.count_ones() % 2 == 1 { 0.8 } else { 0.2 })
        .collect();
    StochasticSpec::new(depth, 3, 0.5, table)
}

/// `Y_t` i.i.d. `Ber(0.7)`, independent of the context.
pub fn iid07_spec(depth: usize) -> Result<StochasticSpec> {
    StochasticSpec::new(depth, 0, 0.5, vec![0.7])
}

/// Streaming realization of a [`StochasticSpec`].
#[derive(Debug, Clone)]
pub struct StochasticStream {
    spec: StochasticSpec,
    bits: BitSource,
    window: ContextWindow,
}

impl StochasticStream {
    pub fn new(spec: StochasticSpec, seed: u64) -> Self {
        let mut bits = BitSource::new(seed);
        let mut window = ContextWindow::from_key(spec.depth, 0).expect("depth validated");
        for _ in 0..spec.depth {
            window = window.push(bits.bernoulli(spec.covariate_bias));
        }
        Self { spec, bits, window }
    }

    pub fn spec(&self) -> &StochasticSpec {
        &self.spec
    }

    /// Context for the coming round.
    pub fn context(&self) -> ContextWindow {
        self.window
    }

    /// Draws the outcome for the current context and advances the covariates.
    pub fn draw_outcome(&mut self) -> Symbol {
        let y = self.bits.bernoulli(self.spec.p_one(&self.window));
        self.window = self.window.push(self.bits.bernoulli(self.spec.covariate_bias));
        y
    }
}

impl Iterator for StochasticStream {
    type Item = (ContextWindow, Symbol);

    fn next(&mut self) -> Option<Self::Item> {
        let c = self.context();
        Some((c, self.draw_outcome()))
    }
}

pub fn generate_stochastic(spec: &StochasticSpec, horizon: usize, seed: u64) -> Result<Vec<(ContextWindow, Symbol)>> {
    if horizon == 0 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    Ok(StochasticStream::new(spec.clone(), seed).take(horizon).collect())
}

/// Population quantities of a stochastic spec.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessAnalytics {
    /// `π*_h` for `h in 0..=D`.
    pub pi_star: Vec<f64>,
    /// `min_x max_y P*(y | x(d))`.
    pub beta_star: f64,
    /// `α_{h,d} = (π*_h - π*_d) / 2` for `h < d`.
    pub alpha: Vec<f64>,
    /// Best `d`-th order predictor, `None` where both symbols tie.
    pub f_star: Vec<Option<Symbol>>,
}

/// Marginalizes the conditional table over the covariate law for every order.
pub fn analytics(spec: &StochasticSpec) -> ProcessAnalytics {
    let d = spec.true_order;
    let p = spec.covariate_bias;
    let bit_prob = |key: u64, bits: usize| -> f64 {
        (0..bits)
            .map(|i| if (key >> i) & 1 == 1 { p } else { 1.0 - p })
            .product()
    };
    let pi_at = |h: usize| -> f64 {
        (0..1u64 << h)
            .map(|prefix| {
                // Joint mass of x(h) and of x(h) together with Y = 1.
                let (mass, mass_one) = (0..1u64 << (d - h)).fold((0.0, 0.0), |(m, m1), older| {
                    let key = prefix | (older << h);
                    let q = bit_prob(key, d);
                    (m + q, m1 + q * spec.cond_table[key as usize])
                });
                if mass == 0.0 {
                    0.0
                } else {
                    mass_one.min(mass - mass_one)
                }
            })
            .sum()
    };
    let pi_d = pi_at(d);
    let pi_star: Vec<f64> = (0..=spec.depth).map(|h| if h < d { pi_at(h) } else { pi_d }).collect();
    let beta_star = spec
        .cond_table
        .iter()
        .map(|&q| q.max(1.0 - q))
        .fold(f64::INFINITY, f64::min);
    let alpha = (0..d).map(|h| (pi_star[h] - pi_d) / 2.0).collect();
    let f_star = spec
        .cond_table
        .iter()
        .map(|&q| match q.partial_cmp(&0.5) {
            Some(std::cmp::Ordering::Greater) => Some(Symbol::One),
            Some(std::cmp::Ordering::Less) => Some(Symbol::Zero),
            _ => None,
        })
        .collect();
    ProcessAnalytics {
        pi_star,
        beta_star,
        alpha,
        f_star,
    }
}

/// Outcome chosen by the worst-case adaptive adversary: the symbol the
/// forecaster considers least likely (`1` on ties).
pub fn adversary_next(w: &Prediction) -> Symbol {
    if w.w0 < w.w1 {
        Symbol::Zero
    } else {
        Symbol::One
    }
}

/// Adaptive adversary with exogenous fair-coin contexts.
#[derive(Debug, Clone)]
pub struct AdaptiveAdversary {
    bits: BitSource,
    window: ContextWindow,
}

impl AdaptiveAdversary {
    pub fn new(depth: usize, seed: u64) -> Result<Self> {
        let mut bits = BitSource::new(seed);
        let mut window = ContextWindow::from_key(depth, 0)?;
        for _ in 0..depth {
            window = window.push(bits.bernoulli(0.5));
        }
        Ok(Self { bits, window })
    }

    pub fn context(&self) -> ContextWindow {
        self.window
    }

    pub fn respond(&mut self, w: &Prediction) -> Symbol {
        let y = adversary_next(w);
        self.window = self.window.push(self.bits.bernoulli(0.5));
        y
    }
}

/// Reads a sequence file: one round per line, `<D context bits> <outcome>`,
/// context bits oldest first. Blank lines and `#` comments are skipped.
pub fn read_sequence(path: &Path) -> Result<Vec<(ContextWindow, Symbol)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sequence(&text).map_err(|msg| Error::Parse {
        path: path.to_path_buf(),
        msg,
    })
}

pub fn parse_sequence(text: &str) -> std::result::Result<Vec<(ContextWindow, Symbol)>, String> {
    let mut out = Vec::new();
    let mut depth = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| format!("line {}: {what}: {line:?}", lineno + 1);
        let mut parts = line.split_whitespace();
        let (ctx, y) = match (parts.next(), parts.next(), parts.next()) {
            (Some(y), None, None) => ("", y),
            (Some(c), Some(y), None) => (c, y),
            _ => return Err(bad("expected `<context bits> <outcome>`")),
        };
        let bits = ctx
            .chars()
            .map(|ch| match ch {
                '0' => Ok(Symbol::Zero),
                '1' => Ok(Symbol::One),
                _ => Err(bad("context must be a 0/1 string")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let y = match y {
            "0" => Symbol::Zero,
            "1" => Symbol::One,
            _ => return Err(bad("outcome must be 0 or 1")),
        };
        match depth {
            None => depth = Some(bits.len()),
            Some(d) if d != bits.len() => return Err(bad("context length differs from earlier lines")),
            _ => {}
        }
        let window = ContextWindow::from_bits(&bits).map_err(|e| bad(&e.to_string()))?;
        out.push((window, y));
    }
    Ok(out)
}

pub fn format_sequence(seq: &[(ContextWindow, Symbol)]) -> String {
    let mut s = String::with_capacity(seq.len() * (seq.first().map_or(0, |c| c.0.depth()) + 3));
    for (c, y) in seq {
        for b in c.bits() {
            s.push(if b == Symbol::One { '1' } else { '0' });
        }
        if c.depth() > 0 {
            s.push(' ');
        }
        s.push(if *y == Symbol::One { '1' } else { '0' });
        s.push('\n');
    }
    s
}

pub fn write_sequence(path: &Path, seq: &[(ContextWindow, Symbol)]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(format_sequence(seq).as_bytes())
        .map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn win(bits: &[u8]) -> ContextWindow {
        let bits: Vec<_> = bits.iter().map(|&b| Symbol::from_u8(b).unwrap()).collect();
        ContextWindow::from_bits(&bits).unwrap()
    }

    #[test]
    fn xor3_table() {
        let spec = xor3_spec(8).unwrap();
        assert_eq!(spec.true_order(), 3);
        assert_eq!(spec.p_one(&win(&[0, 0, 0, 0, 0, 1, 0, 0])), 0.8);
        assert_eq!(spec.p_one(&win(&[0, 0, 0, 0, 0, 1, 1, 0])), 0.2);
        assert!(xor3_spec(2).is_err());
        assert!(spec.has_margin());
    }

    #[test]
    fn iid07_table() {
        let spec = iid07_spec(0).unwrap();
        assert_eq!(spec.cond_table(), &[0.7]);
        assert_eq!(spec.true_order(), 0);
    }

    #[test]
    fn analytics_xor3() {
        let a = analytics(&xor3_spec(8).unwrap());
        assert_relative_eq!(a.pi_star[3], 0.2, epsilon = 1e-15);
        for h in 0..3 {
            assert_relative_eq!(a.pi_star[h], 0.5, epsilon = 1e-15);
        }
        for h in 4..=8 {
            assert_eq!(a.pi_star[h], a.pi_star[3]);
        }
        assert_relative_eq!(a.beta_star, 0.8);
        assert_relative_eq!(a.alpha[2], 0.15, epsilon = 1e-15);
        assert_eq!(a.f_star[0b001], Some(Symbol::One));
    }

    #[test]
    fn analytics_iid07() {
        let a = analytics(&iid07_spec(4).unwrap());
        assert_relative_eq!(a.pi_star[0], 0.3, epsilon = 1e-15);
        assert_relative_eq!(a.beta_star, 0.7);
        assert!(a.alpha.is_empty());
    }

    #[test]
    fn analytics_biased_covariates() {
        // Order-1 copy process with noisy copy and biased covariates.
        let spec = StochasticSpec::new(2, 1, 0.25, vec![0.1, 0.9]).unwrap();
        let a = analytics(&spec);
        // P(Y=1) = 0.75·0.1 + 0.25·0.9 = 0.3.
        assert_relative_eq!(a.pi_star[0], 0.3, epsilon = 1e-15);
        assert_relative_eq!(a.pi_star[1], 0.1, epsilon = 1e-15);
    }

    #[test]
    fn deterministic_conditional() {
        let spec = StochasticSpec::new(3, 2, 0.5, vec![1.0; 4]).unwrap();
        let seq = generate_stochastic(&spec, 200, 9).unwrap();
        assert!(seq.iter().all(|(_, y)| *y == Symbol::One));
    }

    #[test]
    fn same_seed_same_sequence() {
        let spec = xor3_spec(5).unwrap();
        assert_eq!(
            generate_stochastic(&spec, 300, 42).unwrap(),
            generate_stochastic(&spec, 300, 42).unwrap()
        );
        assert_ne!(
            generate_stochastic(&spec, 300, 42).unwrap(),
            generate_stochastic(&spec, 300, 43).unwrap()
        );
    }

    #[test]
    fn contexts_slide() {
        let seq = generate_stochastic(&xor3_spec(4).unwrap(), 50, 1).unwrap();
        for pair in seq.windows(2) {
            assert_eq!(pair[1].0.key() >> 1, pair[0].0.key() & 0b111);
        }
    }

    #[test]
    fn adversary_rule() {
        assert_eq!(adversary_next(&Prediction { w0: 0.8, w1: 0.2 }), Symbol::One);
        assert_eq!(adversary_next(&Prediction { w0: 0.2, w1: 0.8 }), Symbol::Zero);
        assert_eq!(adversary_next(&Prediction::UNIFORM), Symbol::One);
    }

    #[test]
    fn sequence_file_round_trip() {
        let seq = generate_stochastic(&xor3_spec(3).unwrap(), 20, 3).unwrap();
        let text = format_sequence(&seq);
        assert_eq!(text.lines().next().unwrap().len(), 5);
        assert_eq!(parse_sequence(&text).unwrap(), seq);
        assert!(parse_sequence("01 1\n011 0\n").is_err());
        assert!(parse_sequence("0a 1\n").is_err());
        assert!(parse_sequence("01 2\n").is_err());
        let d0 = parse_sequence("1\n0\n").unwrap();
        assert_eq!(d0.len(), 2);
        assert_eq!(d0[0].0.depth(), 0);
    }

    #[test]
    fn spec_validation() {
        assert!(StochasticSpec::new(2, 3, 0.5, vec![0.5; 8]).is_err());
        assert!(StochasticSpec::new(3, 1, 0.5, vec![0.5; 3]).is_err());
        assert!(StochasticSpec::new(3, 1, 0.5, vec![0.5, 1.5]).is_err());
        assert!(!StochasticSpec::new(3, 1, 0.5, vec![0.5, 0.9]).unwrap().has_margin());
    }
}
