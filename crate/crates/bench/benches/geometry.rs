use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use exsplash::bruckbose::{extend, transversal_search, BbContext};
use exsplash::covers::{enumerate_splash_reguli, family_of, Family};
use exsplash::gf::{Field, FieldTower};
use exsplash::pg::is_regular_spread;
use exsplash::subplane::{build_subplane, nine_quadrics, quadric_scan, splash_of};

fn field_mul(c: &mut Criterion) {
    for q in [3, 5] {
        let t = FieldTower::for_q(q).unwrap();
        let e = t.ext();
        let all: Vec<_> = e.elements().collect();
        c.bench_function(&format!("gf/mul_table_q{q}"), |b| {
            b.iter(|| all.iter().fold(e.one(), |acc, &x| e.mul(acc, black_box(x))))
        });
        c.bench_function(&format!("gf/mul_direct_q{q}"), |b| {
            b.iter(|| all.iter().fold(e.one(), |acc, &x| e.mul_direct(acc, black_box(x))))
        });
    }
}

fn transversals(c: &mut Criterion) {
    for q in [2, 3] {
        let ctx = BbContext::new(FieldTower::for_q(q).unwrap());
        let b = build_subplane(&ctx).unwrap();
        let s = splash_of(&ctx, &b).unwrap();
        let planes: Vec<_> = family_of(&ctx, &s, Family::Tangent)
            .planes
            .iter()
            .map(|p| extend(ctx.tower(), p))
            .collect();
        c.bench_function(&format!("bruckbose/transversal_search_q{q}"), |bn| {
            bn.iter(|| transversal_search(ctx.tower(), black_box(&planes)).unwrap())
        });
    }
}

fn quadrics(c: &mut Criterion) {
    let ctx = BbContext::new(FieldTower::for_q(3).unwrap());
    let b = build_subplane(&ctx).unwrap();
    let nine = nine_quadrics(ctx.tower(), &b).unwrap();
    c.bench_function("subplane/quadric_scan_q3", |bn| {
        bn.iter(|| quadric_scan(ctx.tower(), black_box(&nine)))
    });
}

fn spread_and_reguli(c: &mut Criterion) {
    let ctx = BbContext::new(FieldTower::for_q(3).unwrap());
    c.bench_function("pg/is_regular_spread_q3", |bn| {
        bn.iter(|| is_regular_spread(ctx.tower().base(), black_box(ctx.spread())).unwrap())
    });
    let b = build_subplane(&ctx).unwrap();
    let s = splash_of(&ctx, &b).unwrap();
    c.bench_function("covers/enumerate_splash_reguli_q3", |bn| {
        bn.iter(|| enumerate_splash_reguli(&ctx, black_box(&s.labels)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = field_mul, transversals, quadrics, spread_and_reguli
}
criterion_main!(benches);
