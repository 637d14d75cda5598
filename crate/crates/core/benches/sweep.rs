//! Sequential vs rayon execution for the three heaviest sweeps.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ffhyper::audit::{self, AuditConfig};
use ffhyper::chars::JacobiTable;
use ffhyper::curves::{self, Model};
use ffhyper::hyp::TwoF1;
use ffhyper::{Exec, FieldCtx};
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn jacobi_table(c: &mut Criterion) {
    let ctx = FieldCtx::new(7, 2).unwrap();
    let mut g = c.benchmark_group("jacobi_table_q49");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| black_box(JacobiTable::new(&ctx, exec))));
    }
    g.finish();
}

fn two_f_one_sweep(c: &mut Criterion) {
    let ctx = FieldCtx::new(3, 4).unwrap();
    let mut g = c.benchmark_group("two_f_one_all_q81");
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| black_box(TwoF1::new(&ctx, exec).eval_all(&ctx, exec)))
        });
    }
    g.finish();
}

fn count_grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_grid_ghuff");
    g.sample_size(10);
    for q in [(23, 1), (7, 2)] {
        let ctx = FieldCtx::new(q.0, q.1).unwrap();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, ctx.q()), &ctx, |b, ctx| {
                b.iter(|| black_box(curves::count_grid(ctx, Model::GeneralHuff, exec)))
            });
        }
    }
    g.finish();
}

fn audit_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("audit_c1_q_le_31");
    g.sample_size(10);
    let qs = ffhyper::ff::odd_prime_powers(31);
    for (name, exec) in MODES {
        let cfg = AuditConfig {
            exec,
            ..AuditConfig::default()
        };
        g.bench_function(name, |b| {
            b.iter(|| black_box(audit::audit_identity_with("C1", &qs, &cfg).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    jacobi_table,
    two_f_one_sweep,
    count_grid,
    audit_sweep
);
criterion_main!(benches);
