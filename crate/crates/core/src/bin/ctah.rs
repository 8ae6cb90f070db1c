use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ctah::harness::config::parse_prior;
use ctah::harness::output::write_experiment;
use ctah::harness::plot::{render_svg, series_from_files, PlotSpec};
use ctah::harness::sweep::write_sweep;
use ctah::harness::{run_experiment, sweep, ProcessSpec, RawConfig};
use ctah::oracle::equivalence_check;
use ctah::processes::{generate_stochastic, iid07_spec, write_sequence, xor3_spec};
use ctah::{Error, Result};

/// Equivalence tolerance, sup norm per round.
const EQUIVALENCE_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "ctah", version, about = "Context-tree AdaHedge experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and check the regret bounds.
    Run(ExperimentArgs),
    /// Uniform-prior forecasters of every order 0..=depth on shared sequences.
    Sweep(ExperimentArgs),
    /// Compare the efficient update with brute-force enumeration.
    EquivalenceCheck {
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value = "prop")]
        prior: String,
        #[arg(long, default_value_t = 50)]
        horizon: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Line plot of one column from trace or aggregate CSVs.
    Plot {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "cumulative_loss")]
        column: String,
        /// Divide values by t.
        #[arg(long)]
        per_round: bool,
        #[arg(long, default_value = "")]
        title: String,
    },
    /// Write a sequence file from a stochastic process.
    Generate {
        #[arg(long, default_value = "xor3")]
        process: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 1500)]
        horizon: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    depth: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
    /// uniform, prop or table:<path>
    #[arg(long)]
    prior: Option<String>,
    /// ctah, ftl:<h> or fixed-eta:<eta>
    #[arg(long)]
    algorithm: Option<String>,
    /// xor3, iid07, file:<path> or adversary
    #[arg(long)]
    process: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    /// Charge the 0/1 loss of a sampled symbol instead of the expected loss.
    #[arg(long)]
    sample: bool,
    /// uniform or zero
    #[arg(long)]
    ftl_ties: Option<String>,
    /// Run repetitions one after another.
    #[arg(long)]
    serial: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn raw(&self) -> Result<RawConfig> {
        let base = match &self.config {
            Some(p) => RawConfig::from_file(p)?,
            None => RawConfig::default(),
        };
        let flags = RawConfig {
            depth: self.depth.clone(),
            horizon: self.horizon.clone(),
            prior: self.prior.clone(),
            algorithm: self.algorithm.clone(),
            process: self.process.clone(),
            seed: self.seed.clone(),
            reps: self.reps.clone(),
            sample: self.sample.then(|| "true".into()),
            out: self.out.as_ref().map(|p| p.display().to_string()),
            ftl_ties: self.ftl_ties.clone(),
            serial: self.serial.then(|| "true".into()),
        };
        Ok(base.overlay(flags))
    }
}

fn run(args: ExperimentArgs) -> Result<()> {
    let cfg = args.raw()?.build()?;
    let exp = run_experiment(&cfg)?;
    if let Some(dir) = &cfg.out {
        write_experiment(&exp, dir)?;
    }
    if let Some(last) = exp.aggregate.last() {
        println!("T = {}, mean cumulative loss {:.4}", last.t, last.mean_loss);
        for (d, r) in last.mean_regret.iter().enumerate() {
            println!("  mean regret to order {d}: {r:.4}");
        }
    }
    match exp.first_failure() {
        Some((rep, v)) => Err(Error::CheckFailed(format!("repetition {rep}: {v}"))),
        None => {
            let n: usize = exp.runs.iter().map(|r| r.verdicts.len()).sum();
            println!("{n} checks passed");
            Ok(())
        }
    }
}

fn run_sweep(args: ExperimentArgs) -> Result<()> {
    let cfg = args.raw()?.build()?;
    if matches!(cfg.process, ProcessSpec::Adversary) {
        return Err(Error::Config("sweep needs a stochastic or file process".into()));
    }
    let rows = sweep(&cfg)?;
    println!("order  loss/T    pi_hat    estimation");
    for r in &rows {
        let est = r.mean_estimation.map_or_else(|| "-".into(), |e| format!("{e:.3}"));
        println!("{:>5}  {:.5}  {:.5}  {est}", r.order, r.mean_loss_rate, r.mean_pi_hat);
    }
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.clone(),
            source: e,
        })?;
        write_sweep(&dir.join("sweep.csv"), &rows)?;
    }
    Ok(())
}

fn equivalence(depth: usize, prior: &str, horizon: usize, seed: u64) -> Result<()> {
    let kind = parse_prior(prior)?;
    let report = equivalence_check(depth, &kind, horizon, seed)?;
    println!(
        "max deviation {:.6e} at round {} (depth {}, {} rounds, {} at infinite rate)",
        report.max_deviation, report.worst_round, report.depth, report.horizon, report.infinite_eta_rounds
    );
    if report.max_deviation <= EQUIVALENCE_TOL {
        Ok(())
    } else {
        Err(Error::CheckFailed(format!(
            "deviation {:.6e} exceeds {EQUIVALENCE_TOL:e}",
            report.max_deviation
        )))
    }
}

fn plot(csv: &[PathBuf], out: &PathBuf, column: &str, per_round: bool, title: &str) -> Result<()> {
    let paths: Vec<&Path> = csv.iter().map(PathBuf::as_path).collect();
    let series = series_from_files(&paths, column, per_round)?;
    let spec = PlotSpec {
        title: title.to_string(),
        y_label: if per_round { format!("{column} / t") } else { column.to_string() },
        ..Default::default()
    };
    let svg = render_svg(&spec, &series)?;
    std::fs::write(out, svg).map_err(|e| Error::Io {
        path: out.clone(),
        source: e,
    })
}

fn generate(process: &str, depth: usize, horizon: usize, seed: u64, out: &Path) -> Result<()> {
    let spec = match ProcessSpec::parse(process)? {
        ProcessSpec::Xor3 => xor3_spec(depth)?,
        ProcessSpec::Iid07 => iid07_spec(depth)?,
        other => {
            return Err(Error::Config(format!(
                "cannot generate from {}; use xor3 or iid07",
                other.label()
            )))
        }
    };
    let seq = generate_stochastic(&spec, horizon, seed)?;
    write_sequence(out, &seq)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => run_sweep(a),
        Command::EquivalenceCheck {
            depth,
            prior,
            horizon,
            seed,
        } => equivalence(depth, &prior, horizon, seed),
        Command::Plot {
            csv,
            out,
            column,
            per_round,
            title,
        } => plot(&csv, &out, &column, per_round, &title),
        Command::Generate {
            process,
            depth,
            horizon,
            seed,
            out,
        } => generate(&process, depth, horizon, seed, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
