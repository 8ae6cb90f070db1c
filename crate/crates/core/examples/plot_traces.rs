//! Normalized regret curves for three forecasters as a standalone SVG.

use std::path::Path;

use ctah::harness::output::write_aggregate;
use ctah::harness::plot::{render_svg, series_from_files, PlotSpec};
use ctah::harness::{run_experiment, AlgorithmSpec, ExperimentConfig, ProcessSpec};
use ctah::PriorKind;

fn main() -> ctah::Result<()> {
    let dir = Path::new("target/plot_traces");
    std::fs::create_dir_all(dir).expect("create output directory");
    let mut files = Vec::new();
    for (name, alg, prior) in [
        ("ctah-prop", AlgorithmSpec::Ctah, PriorKind::Proportional),
        ("ctah-uniform", AlgorithmSpec::Ctah, PriorKind::Uniform),
        ("ftl-3", AlgorithmSpec::Ftl(3), PriorKind::Uniform),
    ] {
        let exp = run_experiment(&ExperimentConfig::new(alg, prior, 8, 1500, ProcessSpec::Xor3).with_reps(10))?;
        let path = dir.join(format!("{name}.csv"));
        write_aggregate(&path, &exp.aggregate)?;
        files.push(path);
    }
    let paths: Vec<&Path> = files.iter().map(|p| p.as_path()).collect();
    let series = series_from_files(&paths, "regret_3", true)?;
    let spec = PlotSpec {
        title: "xor3, D = 8: R_3 / t".into(),
        y_label: "normalized regret".into(),
        ..Default::default()
    };
    let svg = dir.join("regret.svg");
    std::fs::write(&svg, render_svg(&spec, &series)?).expect("write svg");
    println!("wrote {}", svg.display());
    Ok(())
}
