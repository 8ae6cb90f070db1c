//! Experiment configuration.
//!
//! Settings come from a flat `key = value` file (one per line, `#` starts a
//! comment) and from command-line flags; flags win. Keys match the long
//! flag names: `depth`, `horizon`, `prior`, `algorithm`, `process`, `seed`,
//! `reps`, `sample`, `out`, `ftl-ties`, `serial`.

use std::fs;
use std::path::{Path, PathBuf};

use crate::baselines::{TieRule, DEFAULT_FIXED_ETA};
use crate::context::MAX_DEPTH;
use crate::error::{Error, Result};
use crate::prior::PriorKind;

#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmSpec {
    /// Context-tree AdaHedge with the configured prior.
    Ctah,
    /// Follow-the-Context-Leader at order `h`.
    Ftl(usize),
    /// Tree-expert exponential weights at a fixed rate.
    FixedEta(f64),
}

impl AlgorithmSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ctah" {
            return Ok(AlgorithmSpec::Ctah);
        }
        if let Some(h) = s.strip_prefix("ftl:") {
            return h
                .parse()
                .map(AlgorithmSpec::Ftl)
                .map_err(|_| Error::Config(format!("bad FTL order in {s:?}")));
        }
        if s == "fixed-eta" {
            return Ok(AlgorithmSpec::FixedEta(DEFAULT_FIXED_ETA));
        }
        if let Some(eta) = s.strip_prefix("fixed-eta:") {
            let eta: f64 = eta
                .parse()
                .map_err(|_| Error::Config(format!("bad learning rate in {s:?}")))?;
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::Config(format!("fixed learning rate must be positive, got {eta}")));
            }
            return Ok(AlgorithmSpec::FixedEta(eta));
        }
        Err(Error::Config(format!(
            "unknown algorithm {s:?} (expected ctah, ftl:<h>, fixed-eta:<eta>)"
        )))
    }

    pub fn label(&self) -> String {
        match self {
            AlgorithmSpec::Ctah => "ctah".into(),
            AlgorithmSpec::Ftl(h) => format!("ftl:{h}"),
            AlgorithmSpec::FixedEta(eta) => format!("fixed-eta:{eta}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProcessSpec {
    Xor3,
    Iid07,
    File(PathBuf),
    Adversary,
}

impl ProcessSpec {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "xor3" => Ok(ProcessSpec::Xor3),
            "iid07" => Ok(ProcessSpec::Iid07),
            "adversary" => Ok(ProcessSpec::Adversary),
            other => match other.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(ProcessSpec::File(PathBuf::from(p))),
                _ => Err(Error::Config(format!(
                    "unknown process {other:?} (expected xor3, iid07, file:<path>, adversary)"
                ))),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            ProcessSpec::Xor3 => "xor3".into(),
            ProcessSpec::Iid07 => "iid07".into(),
            ProcessSpec::File(p) => format!("file:{}", p.display()),
            ProcessSpec::Adversary => "adversary".into(),
        }
    }
}

/// Parses `uniform`, `prop` or `table:<path>`. Table files hold `D + 1`
/// nonnegative numbers separated by whitespace or commas.
pub fn parse_prior(s: &str) -> Result<PriorKind> {
    match s.trim() {
        "uniform" => Ok(PriorKind::Uniform),
        "prop" => Ok(PriorKind::Proportional),
        other => match other.strip_prefix("table:") {
            Some(p) => read_prior_table(Path::new(p)).map(PriorKind::Table),
            None => Err(Error::Config(format!(
                "unknown prior {other:?} (expected uniform, prop, table:<path>)"
            ))),
        },
    }
}

fn read_prior_table(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c.is_whitespace() || c == ',').collect::<Vec<_>>())
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                msg: format!("not a number: {tok:?}"),
            })
        })
        .collect()
}

/// A fully validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmSpec,
    pub prior: PriorKind,
    pub depth: usize,
    pub horizon: usize,
    pub process: ProcessSpec,
    pub base_seed: u64,
    pub repetitions: usize,
    pub sampled_predictions: bool,
    pub out: Option<PathBuf>,
    pub ftl_ties: TieRule,
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn new(algorithm: AlgorithmSpec, prior: PriorKind, depth: usize, horizon: usize, process: ProcessSpec) -> Self {
        Self {
            algorithm,
            prior,
            depth,
            horizon,
            process,
            base_seed: 1,
            repetitions: 1,
            sampled_predictions: false,
            out: None,
            ftl_ties: TieRule::Uniform,
            parallel: true,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.base_seed = seed;
        self
    }

    pub fn with_reps(mut self, reps: usize) -> Self {
        self.repetitions = reps;
        self
    }

    pub fn with_out(mut self, out: impl Into<PathBuf>) -> Self {
        self.out = Some(out.into());
        self
    }

    /// Seed of repetition `i`.
    pub fn seed_for(&self, rep: usize) -> u64 {
        self.base_seed.wrapping_add(rep as u64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.depth > MAX_DEPTH {
            return Err(Error::Config(format!("depth {} exceeds {MAX_DEPTH}", self.depth)));
        }
        if let AlgorithmSpec::Ftl(h) = self.algorithm {
            if h > self.depth {
                return Err(Error::Config(format!(
                    "FTL order {h} exceeds depth {}",
                    self.depth
                )));
            }
        }
        if let PriorKind::Table(g) = &self.prior {
            if g.len() != self.depth + 1 {
                return Err(Error::Config(format!(
                    "prior table has {} entries but depth {} needs {}",
                    g.len(),
                    self.depth,
                    self.depth + 1
                )));
            }
        }
        Ok(())
    }
}

/// String-valued settings gathered from a config file and flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub depth: Option<String>,
    pub horizon: Option<String>,
    pub prior: Option<String>,
    pub algorithm: Option<String>,
    pub process: Option<String>,
    pub seed: Option<String>,
    pub reps: Option<String>,
    pub sample: Option<String>,
    pub out: Option<String>,
    pub ftl_ties: Option<String>,
    pub serial: Option<String>,
}

impl RawConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let slot = match key {
            "depth" => &mut self.depth,
            "horizon" => &mut self.horizon,
            "prior" => &mut self.prior,
            "algorithm" => &mut self.algorithm,
            "process" => &mut self.process,
            "seed" => &mut self.seed,
            "reps" => &mut self.reps,
            "sample" => &mut self.sample,
            "out" => &mut self.out,
            "ftl-ties" => &mut self.ftl_ties,
            "serial" => &mut self.serial,
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        };
        *slot = Some(value.to_string());
        Ok(())
    }

    pub fn parse_file_text(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("config line {}: expected key = value", i + 1)))?;
            raw.set(k.trim(), v.trim())?;
        }
        Ok(raw)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_file_text(&text)
    }

    /// Values present in `over` replace those in `self`.
    pub fn overlay(mut self, over: RawConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(depth, horizon, prior, algorithm, process, seed, reps, sample, out, ftl_ties, serial);
        self
    }

    pub fn build(&self) -> Result<ExperimentConfig> {
        fn num<T: std::str::FromStr>(key: &str, v: &Option<String>, default: T) -> Result<T> {
            match v {
                None => Ok(default),
                Some(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("invalid value for {key}: {s:?}"))),
            }
        }
        fn flag(key: &str, v: &Option<String>) -> Result<bool> {
            match v.as_deref().map(str::trim) {
                None | Some("false") | Some("0") => Ok(false),
                Some("true") | Some("1") | Some("") => Ok(true),
                Some(s) => Err(Error::Config(format!("invalid boolean for {key}: {s:?}"))),
            }
        }
        let cfg = ExperimentConfig {
            algorithm: AlgorithmSpec::parse(self.algorithm.as_deref().unwrap_or("ctah"))?,
            prior: parse_prior(self.prior.as_deref().unwrap_or("prop"))?,
            depth: num("depth", &self.depth, 8usize)?,
            horizon: num("horizon", &self.horizon, 1500usize)?,
            process: ProcessSpec::parse(self.process.as_deref().unwrap_or("xor3"))?,
            base_seed: num("seed", &self.seed, 1u64)?,
            repetitions: num("reps", &self.reps, 1usize)?,
            sampled_predictions: flag("sample", &self.sample)?,
            out: self.out.as_ref().map(PathBuf::from),
            ftl_ties: match self.ftl_ties.as_deref().map(str::trim) {
                None | Some("uniform") => TieRule::Uniform,
                Some("zero") => TieRule::PredictZero,
                Some(s) => return Err(Error::Config(format!("invalid ftl-ties {s:?} (uniform or zero)"))),
            },
            parallel: !flag("serial", &self.serial)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
