use criterion::{criterion_group, criterion_main, Criterion};
use segment_upgrade::algebra::{BigFloat, Fp, MonomialOrder, PolyRing, PrimeField};
use segment_upgrade::upgrade::segment_constraint;
use std::hint::black_box;

fn prime(c: &mut Criterion) {
    let a = Fp::new(123_456_789_012);
    let b = Fp::new(98_765_432_109);
    c.bench_function("fp mul", |bn| bn.iter(|| black_box(a) * black_box(b)));
    c.bench_function("fp inverse", |bn| bn.iter(|| black_box(a).inverse().unwrap()));
}

fn float(c: &mut Criterion) {
    for prec in [256, 1088] {
        let x = BigFloat::from_f64(std::f64::consts::PI, prec).sqrt().unwrap();
        let y = BigFloat::from_f64(std::f64::consts::E, prec).sqrt().unwrap();
        c.bench_function(&format!("bigfloat mul {prec}"), |b| b.iter(|| black_box(&x).mul(black_box(&y))));
        c.bench_function(&format!("bigfloat div {prec}"), |b| b.iter(|| black_box(&x).div(black_box(&y)).unwrap()));
    }
}

fn constraint(c: &mut Criterion) {
    let ring = PolyRing::new(PrimeField::new(), MonomialOrder::default());
    let x = [3, 1, 4, 1].map(Fp::from_i64);
    let y = [5, 9, 2, 6].map(Fp::from_i64);
    let d = Fp::from_i64(7);
    c.bench_function("segment constraint", |b| b.iter(|| segment_constraint(&ring, &x, &y, &d)));
}

criterion_group!(benches, prime, float, constraint);
criterion_main!(benches);
