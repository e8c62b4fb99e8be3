use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fuglede_core::scan::fuglede_scan;
use fuglede_core::tiling::enumerate_complements;
use fuglede_core::{Group, PointSet};
use rayon::ThreadPoolBuilder;

// Same workload on a one-thread pool and on the default pool.
fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let one = ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = ThreadPoolBuilder::new().build().unwrap();
    vec![("1-thread", one), ("default", all)]
}

fn complements(c: &mut Criterion) {
    let g = Group::new(&[4, 4, 2]).unwrap();
    let t = PointSet::from_coords(&g, &[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]).unwrap();
    let mut group = c.benchmark_group("enumerate_complements");
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &t, |b, t| {
            b.iter(|| pool.install(|| enumerate_complements(t, usize::MAX).unwrap().complements.len()))
        });
    }
    group.finish();
}

fn scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("fuglede_scan");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(name, |b| b.iter(|| pool.install(|| fuglede_scan(10, 64, 1_000_000).unwrap().discrepancies())));
    }
    group.finish();
}

criterion_group!(benches, complements, scan);
criterion_main!(benches);
