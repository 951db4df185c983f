use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use recolle_bench::{algebra, algebra_f2, element};
use recolle_core::algebra::build_algebra;
use recolle_core::exactla::Field;
use recolle_core::fdmod::simple_module;
use recolle_core::fixtures;
use recolle_core::homology::min_resolution;
use recolle_core::kbproj::{arrow_complex, hom_dim, ProjComplex};
use recolle_core::oracle::{hom_bruteforce, DEFAULT_LIMIT};
use recolle_core::recollement::{build_recollement, restriction_report};
use recolle_core::search::{enumerate_exceptional, stratification_trees, SearchCaps};

fn algebras(c: &mut Criterion) {
    let q = fixtures::fourteen();
    c.bench_function("build_algebra/fourteen", |b| b.iter(|| build_algebra(black_box(&q)).unwrap()));
}

fn resolutions(c: &mut Criterion) {
    let a = algebra(fixtures::radical_square_zero());
    let s = simple_module(&a, 0);
    c.bench_function("min_resolution/rsz_s1_depth12", |b| b.iter(|| min_resolution(black_box(&s), 12)));
}

fn homs(c: &mut Criterion) {
    let a = algebra(fixtures::fourteen());
    let p = ProjComplex::stalk(&a, &[0, 1], 0);
    c.bench_function("hom_dim/fourteen_regular", |b| b.iter(|| hom_dim(black_box(&p), &p, 0)));

    let f = algebra_f2(fixtures::ladder_three());
    let x = arrow_complex(&f, 1, 0, element(&f, "α"), -1);
    let mut g = c.benchmark_group("cone_alpha");
    g.bench_function("hom_dim", |b| b.iter(|| hom_dim(black_box(&x), &x, 0)));
    g.bench_function("hom_bruteforce", |b| b.iter(|| hom_bruteforce(black_box(&x), &x, 0, DEFAULT_LIMIT).unwrap()));
    g.finish();
}

fn recollements(c: &mut Criterion) {
    let a = algebra(fixtures::ladder_three());
    c.bench_function("restriction_report/ladder_three_e1", |b| {
        b.iter(|| {
            let rec = build_recollement(&a, black_box(&[0]), 20).unwrap();
            restriction_report(&rec, 20)
        })
    });
    let j = algebra(fixtures::jordan_holder());
    c.bench_function("stratification_trees/jordan_holder", |b| b.iter(|| stratification_trees(black_box(&j), 30, 4).unwrap()));
}

fn search(c: &mut Criterion) {
    let a = algebra(fixtures::radical_square_zero());
    let mut g = c.benchmark_group("enumerate_exceptional");
    g.sample_size(10);
    g.bench_function("rsz_2_2_f2", |b| b.iter(|| enumerate_exceptional(black_box(&a), Field::Prime(2), SearchCaps::new(2, 2), 1).unwrap()));
    g.finish();
}

criterion_group!(benches, algebras, resolutions, homs, recollements, search);
criterion_main!(benches);
