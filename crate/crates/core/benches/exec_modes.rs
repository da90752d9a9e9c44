use ceerlab_core::interp::{check_corpus, check_gadget_arithmetic};
use ceerlab_core::kernel::facts::{cancellation, FactDomain};
use ceerlab_core::probe::{build_fixture, probe_fixture};
use ceerlab_core::Exec;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn kernel(c: &mut Criterion) {
    let d = FactDomain::new(6, 4, 2);
    let mut g = c.benchmark_group("cancellation");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| black_box(cancellation(&d, e))));
    }
    g.finish();
}

fn gadget(c: &mut Criterion) {
    let mut g = c.benchmark_group("gadget_arithmetic_n8");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| black_box(check_gadget_arithmetic(8, e))));
    }
    g.finish();
}

fn corpus(c: &mut Criterion) {
    let mut g = c.benchmark_group("corpus_n32");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| black_box(check_corpus(32, e))));
    }
    g.finish();
}

fn probe(c: &mut Criterion) {
    let fx = build_fixture("name-label:2").expect("packaged fixture");
    let mut g = c.benchmark_group("probe_name_label_2");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| black_box(probe_fixture(&fx, e))));
    }
    g.finish();
}

criterion_group!(benches, kernel, gadget, corpus, probe);
criterion_main!(benches);
