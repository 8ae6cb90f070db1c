use ctah::processes::{analytics, generate_stochastic, iid07_spec, xor3_spec, StochasticStream};
use ctah::{ContextStatsTable, Symbol};

#[test]
fn xor3_conditional_frequency() {
    let seq = generate_stochastic(&xor3_spec(3).unwrap(), 100_000, 99).unwrap();
    let (mut hits, mut n) = (0u64, 0u64);
    for (c, y) in &seq {
        if c.key().count_ones() % 2 == 1 {
            n += 1;
            hits += (*y == Symbol::One) as u64;
        }
    }
    let freq = hits as f64 / n as f64;
    assert!((freq - 0.8).abs() < 0.01, "{freq}");
}

#[test]
fn estimated_unpredictability_converges_over_seeds() {
    let spec = xor3_spec(5).unwrap();
    let pi = analytics(&spec).pi_star;
    let mut mean = [0.0; 6];
    for seed in 0..50 {
        let mut stats = ContextStatsTable::new(5).unwrap();
        for (c, y) in StochasticStream::new(spec.clone(), seed).take(4000) {
            stats.record(&c, y).unwrap();
        }
        for (h, m) in mean.iter_mut().enumerate() {
            *m += stats.estimated_unpredictability(h).unwrap() / 50.0;
        }
    }
    for h in 3..=5 {
        assert!((mean[h] - pi[h]).abs() < 0.01, "h={h}: {} vs {}", mean[h], pi[h]);
    }
    assert!((pi[0] - 0.5).abs() < 1e-12);
}

#[test]
fn iid07_analytics() {
    let a = analytics(&iid07_spec(4).unwrap());
    for p in &a.pi_star {
        assert!((p - 0.3).abs() < 1e-12);
    }
    assert!(a.f_star.iter().all(|f| *f == Some(Symbol::One)));
}

#[test]
fn generation_is_seeded() {
    let s = xor3_spec(8).unwrap();
    assert_eq!(generate_stochastic(&s, 500, 3).unwrap(), generate_stochastic(&s, 500, 3).unwrap());
    assert_ne!(generate_stochastic(&s, 500, 3).unwrap(), generate_stochastic(&s, 500, 4).unwrap());
}
