//! Contexts and cumulative per-context loss counts.
//!
//! A [`ContextWindow`] holds the last `D` covariate bits `(c_1, ..., c_D)`
//! with `c_D` the most recent. Windows are packed into integers
//! little-endian by recency: bit `i` of the key is `c_{D-i}`, so the
//! length-`h` suffix (the `h` most recent bits) is the low `h` bits.
//!
//! [`ContextStatsTable`] keeps, for every suffix length `h in 0..=D` and
//! every `h`-bit context, how often predicting 0 and predicting 1 would
//! have been wrong. On a binary alphabet each arrival increments exactly
//! one of the two counts.

use crate::error::{Error, Result};

/// Largest supported context depth. Level `h` allocates `2^h` count pairs.
pub const MAX_DEPTH: usize = 24;

/// A binary symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
}

impl Symbol {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }

    pub fn from_u8(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Symbol::Zero),
            1 => Ok(Symbol::One),
            other => Err(Error::Usage(format!("symbol must be 0 or 1, got {other}"))),
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Symbol::Zero => 0,
            Symbol::One => 1,
        }
    }

    #[inline]
    pub fn flip(self) -> Self {
        match self {
            Symbol::Zero => Symbol::One,
            Symbol::One => Symbol::Zero,
        }
    }
}

/// The last `depth` covariate bits, packed by recency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContextWindow {
    depth: usize,
    key: u64,
}

impl ContextWindow {
    /// Builds a window from bits listed oldest first, `(c_1, ..., c_D)`.
    pub fn from_bits(bits: &[Symbol]) -> Result<Self> {
        if bits.len() > MAX_DEPTH {
            return Err(Error::Config(format!(
                "context depth {} exceeds maximum {MAX_DEPTH}",
                bits.len()
            )));
        }
        let depth = bits.len();
        let key = bits
            .iter()
            .rev()
            .enumerate()
            .fold(0u64, |acc, (i, b)| acc | ((b.index() as u64) << i));
        Ok(Self { depth, key })
    }

    /// Builds a window from a packed key (bit `i` is `c_{D-i}`).
    pub fn from_key(depth: usize, key: u64) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::Config(format!(
                "context depth {depth} exceeds maximum {MAX_DEPTH}"
            )));
        }
        if depth < 64 && key >> depth != 0 {
            return Err(Error::Usage(format!(
                "key {key:#b} has bits beyond depth {depth}"
            )));
        }
        Ok(Self { depth, key })
    }

    pub fn empty() -> Self {
        Self { depth: 0, key: 0 }
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.depth
    }

    #[inline]
    pub fn key(&self) -> u64 {
        self.key
    }

    /// Packed key of the `h` most recent bits.
    #[inline]
    pub fn suffix_key(&self, h: usize) -> u64 {
        debug_assert!(h <= self.depth);
        self.key & ((1u64 << h) - 1)
    }

    /// The window restricted to its `h` most recent bits.
    pub fn truncate(&self, h: usize) -> Result<Self> {
        if h > self.depth {
            return Err(Error::Usage(format!(
                "cannot truncate depth-{} window to {h} bits",
                self.depth
            )));
        }
        Ok(Self {
            depth: h,
            key: self.suffix_key(h),
        })
    }

    /// Bits oldest first.
    pub fn bits(&self) -> Vec<Symbol> {
        (0..self.depth)
            .rev()
            .map(|i| Symbol::from_bit((self.key >> i) & 1 == 1))
            .collect()
    }

    /// Shifts `bit` in as the new most recent coordinate, dropping the oldest.
    pub fn push(&self, bit: Symbol) -> Self {
        if self.depth == 0 {
            return *self;
        }
        let mask = (1u64 << self.depth) - 1;
        Self {
            depth: self.depth,
            key: ((self.key << 1) | bit.index() as u64) & mask,
        }
    }
}

/// Cumulative losses of the two constant predictions under one context.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LossCounts {
    /// Times the outcome was 1, i.e. predicting 0 was wrong.
    pub loss_predict_0: u64,
    /// Times the outcome was 0.
    pub loss_predict_1: u64,
}

impl LossCounts {
    #[inline]
    pub fn get(&self, y: Symbol) -> u64 {
        match y {
            Symbol::Zero => self.loss_predict_0,
            Symbol::One => self.loss_predict_1,
        }
    }

    /// Number of arrivals of this context.
    #[inline]
    pub fn total(&self) -> u64 {
        self.loss_predict_0 + self.loss_predict_1
    }

    #[inline]
    pub fn min(&self) -> u64 {
        self.loss_predict_0.min(self.loss_predict_1)
    }

    #[inline]
    fn record(&mut self, outcome: Symbol) {
        match outcome {
            Symbol::Zero => self.loss_predict_1 += 1,
            Symbol::One => self.loss_predict_0 += 1,
        }
    }
}

/// Dense per-level tables of [`LossCounts`] for every suffix length.
#[derive(Debug, Clone)]
pub struct ContextStatsTable {
    depth: usize,
    round: u64,
    levels: Vec<Vec<LossCounts>>,
}

impl ContextStatsTable {
    pub fn new(depth: usize) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::Config(format!(
                "depth {depth} out of range 0..={MAX_DEPTH}"
            )));
        }
        let levels = (0..=depth)
            .map(|h| vec![LossCounts::default(); 1usize << h])
            .collect();
        Ok(Self {
            depth,
            round: 0,
            levels,
        })
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of recorded rounds `t`.
    #[inline]
    pub fn round(&self) -> u64 {
        self.round
    }

    /// All counts at level `h`, indexed by packed key.
    pub fn level(&self, h: usize) -> Result<&[LossCounts]> {
        self.check_order(h)?;
        Ok(&self.levels[h])
    }

    pub fn record(&mut self, context: &ContextWindow, outcome: Symbol) -> Result<()> {
        if context.depth() != self.depth {
            return Err(Error::Usage(format!(
                "context depth {} does not match table depth {}",
                context.depth(),
                self.depth
            )));
        }
        for (h, level) in self.levels.iter_mut().enumerate() {
            level[context.suffix_key(h) as usize].record(outcome);
        }
        self.round += 1;
        Ok(())
    }

    pub fn loss_counts(&self, h: usize, key: u64) -> Result<LossCounts> {
        self.check_order(h)?;
        self.levels[h]
            .get(key as usize)
            .copied()
            .ok_or_else(|| Error::Usage(format!("key {key:#b} has more than {h} bits")))
    }

    /// Counts at the length-`h` suffix of `context`.
    #[inline]
    pub fn counts_at(&self, context: &ContextWindow, h: usize) -> LossCounts {
        self.levels[h][context.suffix_key(h) as usize]
    }

    /// `N_t(x(h))`: arrivals of the context `key` at level `h`.
    pub fn appearance_count(&self, h: usize, key: u64) -> Result<u64> {
        Ok(self.loss_counts(h, key)?.total())
    }

    /// `S_{t,h}`: number of level-`h` contexts seen at least once.
    pub fn seen_contexts(&self, h: usize) -> Result<usize> {
        self.check_order(h)?;
        Ok(self.levels[h].iter().filter(|c| c.total() > 0).count())
    }

    /// Hindsight loss of the best `d`-th order tree expert:
    /// `sum over x(d) of min_y L_{x(d),t,y}`.
    pub fn best_order_loss(&self, d: usize) -> Result<u64> {
        self.check_order(d)?;
        Ok(self.levels[d].iter().map(LossCounts::min).sum())
    }

    /// `pi_hat_h(t) = best_order_loss(h) / t`.
    pub fn estimated_unpredictability(&self, h: usize) -> Result<f64> {
        if self.round == 0 {
            return Err(Error::EmptyData("estimated unpredictability needs t >= 1"));
        }
        Ok(self.best_order_loss(h)? as f64 / self.round as f64)
    }

    fn check_order(&self, h: usize) -> Result<()> {
        if h > self.depth {
            Err(Error::Usage(format!(
                "order {h} out of range 0..={}",
                self.depth
            )))
        } else {
            Ok(())
        }
    }
}
