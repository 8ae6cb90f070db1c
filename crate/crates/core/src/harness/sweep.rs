//! Model-order sweep: uniform-prior forecasters of every depth `0..=H` on
//! one shared sequence per repetition.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::config::{AlgorithmSpec, ExperimentConfig};
use super::run::{run_experiment_with, ResolvedProcess};
use crate::error::{Error, Result};
use crate::prior::PriorKind;
use crate::processes::analytics;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub order: usize,
    /// Mean of `H_T / T`.
    pub mean_loss_rate: f64,
    pub sd_loss_rate: f64,
    /// Mean of `π̂_h(T)`.
    pub mean_pi_hat: f64,
    /// `π*_h` when the process has one.
    pub pi_star: Option<f64>,
    /// Mean of `H_T - T·π*_h`.
    pub mean_estimation: Option<f64>,
}

/// Sweeps orders `0..=base.depth`. `base` supplies the process, horizon,
/// seeds and repetitions; algorithm and prior are overridden.
pub fn sweep(base: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    base.validate()?;
    let max_order = base.depth;
    let process = ResolvedProcess::resolve(&base.process, max_order)?;
    let pi_star = match &process {
        ResolvedProcess::Stochastic(spec) => Some(analytics(spec).pi_star),
        _ => None,
    };
    (0..=max_order)
        .map(|h| {
            let mut cfg = base.clone();
            cfg.depth = h;
            cfg.algorithm = AlgorithmSpec::Ctah;
            cfg.prior = PriorKind::Uniform;
            let exp = run_experiment_with(&cfg, &process)?;
            let n = exp.runs.len() as f64;
            let rates: Vec<f64> = exp
                .runs
                .iter()
                .map(|r| r.final_row().cumulative_loss / r.final_row().t as f64)
                .collect();
            let mean_loss_rate = rates.iter().sum::<f64>() / n;
            let sd_loss_rate = if n > 1.0 {
                (rates.iter().map(|x| (x - mean_loss_rate).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            let mean_pi_hat = exp.runs.iter().map(|r| r.pi_hat[h]).sum::<f64>() / n;
            let star = pi_star.as_ref().map(|p| p[h]);
            let mean_estimation = star.map(|s| {
                exp.runs
                    .iter()
                    .map(|r| r.final_row().cumulative_loss - r.final_row().t as f64 * s)
                    .sum::<f64>()
                    / n
            });
            Ok(SweepRow {
                order: h,
                mean_loss_rate,
                sd_loss_rate,
                mean_pi_hat,
                pi_star: star,
                mean_estimation,
            })
        })
        .collect()
}

pub fn write_sweep(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let opt = |x: Option<f64>| x.map_or_else(String::new, |v| v.to_string());
    let mut text = String::from("# ctah-sweep v1\norder,mean_loss_rate,sd_loss_rate,mean_pi_hat,pi_star,mean_estimation\n");
    for r in rows {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.order,
            r.mean_loss_rate,
            r.sd_loss_rate,
            r.mean_pi_hat,
            opt(r.pi_star),
            opt(r.mean_estimation)
        ));
    }
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}
