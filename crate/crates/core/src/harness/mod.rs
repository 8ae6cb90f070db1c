//! Experiment harness: configuration, runs, bound checks, sweeps and plots.

pub mod bounds;
pub mod config;
pub mod output;
pub mod plot;
pub mod run;
pub mod sweep;

pub use bounds::BoundVerdict;
pub use config::{AlgorithmSpec, ExperimentConfig, ProcessSpec, RawConfig};
pub use output::write_experiment;
pub use run::{run_experiment, run_repetition, Experiment, ResolvedProcess, RunResult, TraceRow};
pub use sweep::{sweep, SweepRow};
