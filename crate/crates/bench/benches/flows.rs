use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eisenhart_bench::fixtures;
use eisenhart_core::dynamics::{geodesic_flow, newton_flow};
use eisenhart_core::linearize::{roundtrip, straightening_check};
use eisenhart_core::{IntegratorConfig, Profile};
use std::hint::black_box;

fn flows(c: &mut Criterion) {
    let cfg = IntegratorConfig::dp45(1e-12, 1e-12).uniform(1001);
    let mut group = c.benchmark_group("flow_t10");
    group.sample_size(20);
    for f in fixtures() {
        let state = f.system.recovered_state(f.x0, f.v0, &[], 0.0).unwrap();
        group.bench_with_input(BenchmarkId::new("geodesic", f.name()), &state, |b, s| {
            b.iter(|| geodesic_flow(&f.system, black_box(s), (0.0, 10.0), &cfg).unwrap())
        });
        group.bench_function(BenchmarkId::new("newton", f.name()), |b| {
            b.iter(|| newton_flow(f.system.potential(), black_box(f.x0), f.v0, (0.0, 10.0), &cfg).unwrap())
        });
    }
    group.finish();
}

fn linearization(c: &mut Criterion) {
    let mut group = c.benchmark_group("linearize");
    group.sample_size(20);
    for f in fixtures() {
        group.bench_function(BenchmarkId::new("roundtrip", f.name()), |b| {
            b.iter(|| roundtrip(f.system.potential(), black_box(f.x0), f.v0, (0.0, 5.0)).unwrap())
        });
    }
    let v = Profile::exp(1.0, 1.0);
    group.bench_function("straightening_exp", |b| b.iter(|| straightening_check(black_box(&v), 0.0, 1.0, 5e-4, 101).unwrap()));
    group.finish();
}

criterion_group!(benches, flows, linearization);
criterion_main!(benches);
