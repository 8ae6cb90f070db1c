//! CSV and summary writers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::run::{AggregateRow, Experiment, TraceRow};
use crate::error::{Error, Result};
use crate::processes::RNG_ID;

/// First line of every trace file.
pub const TRACE_HEADER: &str = "# ctah-trace v1";
/// First line of every aggregate file.
pub const AGGREGATE_HEADER: &str = "# ctah-aggregate v1";

fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x}")
    }
}

fn csv_writer(path: &Path, header: &str) -> Result<csv::Writer<fs::File>> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    writeln!(file, "{header}").map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

pub fn trace_columns(depth: usize) -> Vec<String> {
    let mut cols: Vec<String> = [
        "t",
        "expected_loss",
        "cumulative_loss",
        "eta",
        "delta",
        "cumulative_delta",
        "variance",
        "cumulative_variance",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    cols.extend((0..=depth).map(|h| format!("q_{h}")));
    cols.extend((0..=depth).map(|d| format!("regret_{d}")));
    cols
}

pub fn write_trace(path: &Path, rows: &[TraceRow]) -> Result<()> {
    let depth = rows.first().map_or(0, |r| r.q.len().saturating_sub(1));
    let mut w = csv_writer(path, TRACE_HEADER)?;
    w.write_record(trace_columns(depth)).map_err(|e| Error::csv(path, e))?;
    for r in rows {
        let mut rec = vec![
            r.t.to_string(),
            num(r.expected_loss),
            num(r.cumulative_loss),
            num(r.eta),
            num(r.delta),
            num(r.cumulative_delta),
            num(r.variance),
            num(r.cumulative_variance),
        ];
        rec.extend(r.q.iter().map(|&x| num(x)));
        rec.extend(r.regret.iter().map(|&x| num(x)));
        w.write_record(&rec).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Aggregate columns: raw means and standard deviations, plus the means
/// divided by `t`.
pub fn write_aggregate(path: &Path, rows: &[AggregateRow]) -> Result<()> {
    let depth = rows.first().map_or(0, |r| r.mean_regret.len().saturating_sub(1));
    let mut w = csv_writer(path, AGGREGATE_HEADER)?;
    let mut header = vec![
        "t".to_string(),
        "mean_cumulative_loss".into(),
        "sd_cumulative_loss".into(),
        "mean_loss_per_round".into(),
    ];
    for d in 0..=depth {
        header.push(format!("mean_regret_{d}"));
        header.push(format!("sd_regret_{d}"));
        header.push(format!("mean_regret_per_round_{d}"));
    }
    w.write_record(&header).map_err(|e| Error::csv(path, e))?;
    for r in rows {
        let t = r.t as f64;
        let mut rec = vec![r.t.to_string(), num(r.mean_loss), num(r.sd_loss), num(r.mean_loss / t)];
        for d in 0..=depth {
            rec.push(num(r.mean_regret[d]));
            rec.push(num(r.sd_regret[d]));
            rec.push(num(r.mean_regret[d] / t));
        }
        w.write_record(&rec).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn summary_text(exp: &Experiment) -> String {
    let c = &exp.config;
    let mut s = String::new();
    s.push_str(&format!("algorithm: {}\n", c.algorithm.label()));
    s.push_str(&format!("prior: {}\n", c.prior.name()));
    s.push_str(&format!("process: {}\n", c.process.label()));
    s.push_str(&format!("depth: {}\nhorizon: {}\n", c.depth, c.horizon));
    s.push_str(&format!("base_seed: {}\nrepetitions: {}\n", c.base_seed, c.repetitions));
    s.push_str(&format!("sampled_predictions: {}\n", c.sampled_predictions));
    s.push_str(&format!("rng: {RNG_ID}\n"));
    if let Some(last) = exp.aggregate.last() {
        s.push_str(&format!("mean_final_loss: {}\n", last.mean_loss));
        for (d, m) in last.mean_regret.iter().enumerate() {
            s.push_str(&format!("mean_final_regret_{d}: {m}\n"));
        }
    }
    for r in &exp.runs {
        for v in &r.verdicts {
            s.push_str(&format!("rep {} seed {}: {v}\n", r.rep, r.seed));
        }
    }
    s.push_str(&format!("status: {}\n", if exp.passed() { "ok" } else { "check failed" }));
    s
}

/// Writes `trace_NNN.csv` per repetition, `aggregate.csv` and
/// `summary.txt` into `dir`, creating it if needed. Returns the paths.
pub fn write_experiment(exp: &Experiment, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for r in &exp.runs {
        let p = dir.join(format!("trace_{:03}.csv", r.rep));
        write_trace(&p, &r.rows)?;
        written.push(p);
    }
    let p = dir.join("aggregate.csv");
    write_aggregate(&p, &exp.aggregate)?;
    written.push(p);
    let p = dir.join("summary.txt");
    fs::write(&p, summary_text(exp)).map_err(|e| Error::io(&p, e))?;
    written.push(p);
    Ok(written)
}

/// A CSV file with `#` comment lines, read column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn read_table(path: &Path) -> Result<Table> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(file);
    let headers = r
        .headers()
        .map_err(|e| Error::csv(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        let row = rec
            .iter()
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    msg: format!("not a number: {f:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(Table { headers, rows })
}
