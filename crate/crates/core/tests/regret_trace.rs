use ctah::harness::run::run_experiment;
use ctah::harness::{AlgorithmSpec, ExperimentConfig, ProcessSpec};
use ctah::processes::{generate_stochastic, write_sequence, xor3_spec};
use ctah::{ContextTreeAdaHedge, PriorKind, PriorSpec, Symbol};

/// Replays a sequence file through the harness and recomputes every regret
/// column from the raw rounds.
#[test]
fn streamed_regret_matches_offline_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.txt");
    let seq = generate_stochastic(&xor3_spec(6).unwrap(), 400, 5).unwrap();
    write_sequence(&path, &seq).unwrap();

    let depth = 4;
    let cfg = ExperimentConfig::new(AlgorithmSpec::Ctah, PriorKind::Proportional, depth, 400, ProcessSpec::File(path));
    let exp = run_experiment(&cfg).unwrap();
    let rows = &exp.runs[0].rows;
    assert!(exp.passed());

    let mut f = ContextTreeAdaHedge::new(PriorSpec::proportional(depth)).unwrap();
    let mut h = 0.0;
    for (t, (c, y)) in seq.iter().enumerate() {
        let c = c.truncate(depth).unwrap();
        h += f.step(&c, *y).unwrap().prediction.expected_loss(*y);
        // Recount from scratch: per order, sum over contexts of the smaller count.
        for d in 0..=depth {
            let mut counts = vec![[0u64; 2]; 1 << d];
            for (c2, y2) in &seq[..=t] {
                counts[c2.suffix_key(d) as usize][(*y2 == Symbol::One) as usize] += 1;
            }
            let best: u64 = counts.iter().map(|c| c[0].min(c[1])).sum();
            let offline = h - best as f64;
            assert!((rows[t].regret[d] - offline).abs() <= 1e-9 * (t + 1) as f64);
        }
        for d in 0..depth {
            assert!(rows[t].regret[d] <= rows[t].regret[d + 1]);
        }
    }
}

#[test]
fn parallel_and_serial_agree() {
    let mut cfg = ExperimentConfig::new(AlgorithmSpec::Ctah, PriorKind::Uniform, 6, 300, ProcessSpec::Iid07).with_reps(8);
    let par = run_experiment(&cfg).unwrap();
    cfg.parallel = false;
    let ser = run_experiment(&cfg).unwrap();
    assert_eq!(par.runs, ser.runs);
    assert_eq!(par.aggregate, ser.aggregate);
}

#[test]
fn repetition_seeds_are_offsets() {
    let cfg = ExperimentConfig::new(AlgorithmSpec::Ctah, PriorKind::Proportional, 3, 100, ProcessSpec::Xor3)
        .with_seed(40)
        .with_reps(3);
    let all = run_experiment(&cfg).unwrap();
    let single = run_experiment(&cfg.clone().with_seed(42).with_reps(1)).unwrap();
    assert_eq!(all.runs[2].seed, 42);
    assert_eq!(all.runs[2].rows, single.runs[0].rows);
}
