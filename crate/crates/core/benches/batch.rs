use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pta_core::batch::{analyze_all, Execution};
use pta_core::interproc::AnalysisVariant;
use pta_core::ir::Program;
use pta_core::oracle::{gen_chain, gen_program};
use std::hint::black_box;

fn corpus() -> Vec<Program> {
    (0..48)
        .map(|s| gen_program(s, 5, 30))
        .chain((0..8).map(gen_chain))
        .collect()
}

fn bench_batch(c: &mut Criterion) {
    let programs = corpus();
    let mut group = c.benchmark_group("corpus");
    group.sample_size(10);
    for variant in [
        AnalysisVariant::SteensCi,
        AnalysisVariant::Dsa,
        AnalysisVariant::TeaDsa,
    ] {
        for (label, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(
                BenchmarkId::new(label, variant.name()),
                &programs,
                |b, ps| b.iter(|| black_box(analyze_all(ps, variant, exec))),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, bench_batch);
criterion_main!(benches);
