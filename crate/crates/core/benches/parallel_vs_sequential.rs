//! Rayon's global pool against a single-thread pool on the hot paths.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use matching_ekr::coclique::enumerate_maximum_cocliques;
use matching_ekr::graph::build_graph;
use matching_ekr::spectral::{char_poly, group_class_table};
use matching_ekr::Limits;
use rayon::ThreadPool;

fn pools() -> [(&'static str, ThreadPool); 2] {
    let build = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    [("parallel", build(rayon::current_num_threads())), ("sequential", build(1))]
}

fn graph_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_graph");
    group.sample_size(10);
    for (name, pool) in pools() {
        for k in [4, 5] {
            group.bench_with_input(BenchmarkId::new(name, k), &k, |b, &k| {
                b.iter(|| pool.install(|| build_graph(k).unwrap()))
            });
        }
    }
    group.finish();
}

fn coclique_search(c: &mut Criterion) {
    let g = build_graph(5).unwrap();
    let mut group = c.benchmark_group("maximum_cocliques_k5");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(name, |b| b.iter(|| pool.install(|| enumerate_maximum_cocliques(&g).unwrap())));
    }
    group.finish();
}

fn characteristic_polynomial(c: &mut Criterion) {
    let a = build_graph(4).unwrap().adjacency_matrix();
    let mut group = c.benchmark_group("char_poly_m8");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(name, |b| b.iter(|| pool.install(|| char_poly(&a).unwrap())));
    }
    group.finish();
}

fn class_table(c: &mut Criterion) {
    let limits = Limits::default();
    let mut group = c.benchmark_group("group_class_table_k4");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(name, |b| b.iter(|| pool.install(|| group_class_table(4, &limits).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, graph_build, coclique_search, characteristic_polynomial, class_table);
criterion_main!(benches);
