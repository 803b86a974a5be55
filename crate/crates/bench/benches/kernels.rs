use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mrd_bench::sample_matrices;
use mrd_core::classify::{are_equivalent, enumerate_semifields, EquivalenceMode};
use mrd_core::constructions::{code2, code3, sec6_c};
use mrd_core::gabidulin::singer_code;
use mrd_core::gf::FieldSpec;

fn field_mul(c: &mut Criterion) {
    let f = FieldSpec::new(3, 5, None).unwrap();
    c.bench_function("gf243_mul_all_pairs", |b| {
        b.iter(|| {
            let mut acc = 0u32;
            for x in f.elements() {
                for y in f.elements() {
                    acc ^= f.mul(x, y);
                }
            }
            black_box(acc)
        })
    });
}

fn rank(c: &mut Criterion) {
    let mats = sample_matrices(2, 4, 97).unwrap();
    c.bench_function("rank_4x4_gf2", |b| b.iter(|| mats.iter().map(|m| m.rank()).sum::<usize>()));
    let mats = sample_matrices(3, 3, 41).unwrap();
    c.bench_function("rank_3x3_gf3", |b| b.iter(|| mats.iter().map(|m| m.rank()).sum::<usize>()));
}

fn is_mrd(c: &mut Criterion) {
    let code = sec6_c().unwrap();
    c.bench_function("is_mrd_729_codewords", |b| b.iter(|| black_box(code.is_mrd())));
}

fn equivalence(c: &mut Criterion) {
    let (a, b2) = (code2().unwrap(), code3().unwrap());
    let s = singer_code(2, 4).unwrap();
    let mut g = c.benchmark_group("equivalence");
    g.sample_size(10);
    g.bench_function("inequivalent_order_16", |b| {
        b.iter(|| are_equivalent(&a, &b2, EquivalenceMode::Additive).unwrap())
    });
    g.bench_function("singer_self", |b| b.iter(|| are_equivalent(&s, &s, EquivalenceMode::Additive).unwrap()));
    g.finish();
}

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    g.bench_function("semifields_order_16", |b| b.iter(|| enumerate_semifields(2, 4).unwrap().classes.len()));
    g.finish();
}

criterion_group!(benches, field_mul, rank, is_mrd, equivalence, census);
criterion_main!(benches);
