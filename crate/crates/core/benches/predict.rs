use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use ctah::processes::{generate_stochastic, xor3_spec};
use ctah::{predict, ContextStatsTable, PriorSpec};

fn bench_predict(c: &mut Criterion) {
    let mut group = c.benchmark_group("predict");
    for depth in 10..=14 {
        let prior = PriorSpec::proportional(depth);
        let seq = generate_stochastic(&xor3_spec(depth).unwrap(), 2000, 11).unwrap();
        let mut stats = ContextStatsTable::new(depth).unwrap();
        for (ctx, y) in &seq {
            stats.record(ctx, *y).unwrap();
        }
        let ctx = seq[0].0;
        group.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, _| {
            b.iter(|| predict(black_box(&stats), black_box(&ctx), 0.7, &prior).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_predict);
criterion_main!(benches);
