use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gsbs_core::intlin::smith_normal_form;
use gsbs_core::twisted::reidemeister_exact;
use gsbs_core::witness::witness_automorphism;
use gsbs_core::{GroupParams, IntMatrix, Limits};
use num_bigint::BigInt;

fn params(n: u64, c: u32) -> GroupParams {
    GroupParams::new(n, c, &Limits::default()).unwrap()
}

fn multiply(c: &mut Criterion) {
    let p = params(65, 3);
    let g = p.element_i64(&[12, -7], 33).unwrap();
    let h = p.element_i64(&[-3, 41], 5).unwrap();
    c.bench_function("multiply n=65 c=3", |b| b.iter(|| p.multiply(black_box(&g), black_box(&h))));
    let e = BigInt::from(1_000_003);
    c.bench_function("power n=65 c=3 e=1e6", |b| b.iter(|| p.power(black_box(&g), &e)));
}

fn snf(c: &mut Criterion) {
    let m = IntMatrix::from_rows([
        [12, -7, 3, 44, 9],
        [5, 18, -21, 2, 7],
        [-3, 6, 9, 15, -30],
        [8, 1, 0, -4, 11],
        [2, 2, 2, 2, 3],
    ])
    .unwrap();
    c.bench_function("smith_normal_form 5x5", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

fn reidemeister(c: &mut Criterion) {
    for (n, cc) in [(15, 3), (30, 2)] {
        let p = params(n, cc);
        let phi = witness_automorphism(&p).unwrap();
        c.bench_function(&format!("reidemeister_exact n={n} c={cc}"), |b| {
            b.iter(|| reidemeister_exact(&p, black_box(&phi), &Limits::default()).unwrap())
        });
    }
}

criterion_group!(benches, multiply, snf, reidemeister);
criterion_main!(benches);
