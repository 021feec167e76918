use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use omega3_bench::case_b_slot;
use omega3_core::engine::{self, CaseIndex, CaseLabel};
use omega3_core::halfline::decompose;
use omega3_core::traces;

fn bench_symbols(c: &mut Criterion) {
    c.bench_function("sigma_minus1_f", |b| {
        b.iter(|| black_box(engine::sigma_minus1_f()))
    });
}

fn bench_halfline(c: &mut Criterion) {
    let s = engine::sigma_minus1_f().restrict_sphere();
    c.bench_function("decompose_order_minus_one", |b| {
        b.iter(|| black_box(decompose(&s).unwrap()))
    });
}

fn bench_case_slot(c: &mut Criterion) {
    c.bench_function("case_b_gradient_slot", |b| {
        b.iter(|| {
            let factors = case_b_slot();
            black_box(engine::pipeline_entry(&factors).unwrap())
        })
    });
}

fn bench_full_case(c: &mut Criterion) {
    c.bench_function("eval_case_a_ii", |b| {
        b.iter(|| black_box(engine::eval_case(&CaseIndex::star(CaseLabel::AII)).unwrap()))
    });
}

fn bench_trace_fit(c: &mut Criterion) {
    c.bench_function("pq_constants_n5_m2", |b| {
        b.iter(|| black_box(traces::pq_constants(5, 2).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_symbols,
    bench_halfline,
    bench_case_slot,
    bench_full_case,
    bench_trace_fit
);
criterion_main!(benches);
