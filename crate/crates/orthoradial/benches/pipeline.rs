//! End-to-end throughput of the covering engine on generated ring
//! instances: preprocessing plus the full run, measured per vertex.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use orthoradial::engine;
use orthoradial::generate::{generate_instance, GeneratorParams};
use orthoradial::preprocess::prepare;

fn cover_engine(c: &mut Criterion) {
    let mut group = c.benchmark_group("cover_engine");
    group.sample_size(10);
    for &n in &[1_000usize, 10_000, 100_000] {
        // Three columns per ring gives exactly 3 * layers vertices.
        let g = generate_instance(GeneratorParams {
            seed: 7,
            layers: n / 3,
            columns: 3,
            perturbations: 0,
        })
        .unwrap();
        group.throughput(Throughput::Elements(g.rep.graph.vertex_count() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| {
                let p = prepare(&g.rep, g.reference).unwrap();
                engine::run(p.wg, p.reference, p.central_dart)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, cover_engine);
criterion_main!(benches);
