use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use segment_upgrade::algebra::MonomialOrder;
use segment_upgrade::solver::{build_template, replay, solve};
use segment_upgrade_bench::{fixture, float_system};

fn construct(c: &mut Criterion) {
    let mut g = c.benchmark_group("construct");
    g.sample_size(10);
    for n in [9, 25, 50] {
        let f = fixture(n);
        g.bench_function(format!("N={n}"), |b| {
            b.iter(|| build_template(&f.template_instance, MonomialOrder::default()).unwrap())
        });
    }
    g.finish();
}

fn apply(c: &mut Criterion) {
    let mut g = c.benchmark_group("replay");
    g.sample_size(10);
    for (n, prec) in [(25, 256), (50, 256)] {
        let f = fixture(n);
        g.bench_function(format!("N={n} {prec} bits"), |b| {
            b.iter_batched(|| float_system(&f, prec), |s| replay(&f.template, &s, prec).unwrap(), BatchSize::LargeInput)
        });
        g.bench_function(format!("solve N={n} {prec} bits"), |b| {
            b.iter(|| solve(&f.template, &f.data, prec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, construct, apply);
criterion_main!(benches);
