//! Benchmarks for the hot paths of the spectral pipeline: coefficient
//! expression evaluation, system-block assembly, the Riccati
//! right-hand side, the dual Vandermonde solve behind the Taylor fits,
//! and the Psi flow end to end on a short interval.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use helweyl_core::expr::Expr;
use helweyl_core::fixtures;
use helweyl_core::riccati::{compute_psi_for, gamma_rhs, PsiTarget};
use helweyl_core::spectral::{evaluate_m, BoundaryCondition};
use helweyl_core::vandermonde::{bp_dual_solve, default_nodes};
use helweyl_core::{IntegratorSettings, Mat2, Problem};
use num_complex::Complex64;

fn short_problem() -> Problem {
    fixtures::builtin("eq2")
        .expect("bundled problem")
        .expect("parses")
        .with_truncation_x(5.0)
        .expect("valid truncation")
}

fn bench_expr_eval(c: &mut Criterion) {
    let expr = Expr::parse("8*x^2*(x^4-3*x^2-5)/(x^2+1)^2").expect("parses");
    c.bench_function("expr_eval_rational", |b| {
        b.iter(|| expr.eval(black_box(3.7)).expect("in domain"))
    });
}

fn bench_s_blocks(c: &mut Criterion) {
    let prob = short_problem();
    let lambda = Complex64::new(1.0, 1.0);
    c.bench_function("s_blocks_assembly", |b| {
        b.iter(|| {
            prob.s_blocks(black_box(3.7), black_box(lambda))
                .expect("in domain")
        })
    });
}

fn bench_gamma_rhs(c: &mut Criterion) {
    let prob = short_problem();
    let lambda = Complex64::new(1.0, 1.0);
    let alpha = Complex64::new(1.0, 1.0);
    let blocks = prob.s_blocks(3.7, lambda).expect("in domain");
    let gamma = Mat2::diag(Complex64::new(0.3, -0.1), Complex64::new(0.2, 0.4));
    c.bench_function("gamma_rhs", |b| {
        b.iter(|| gamma_rhs(black_box(&blocks), black_box(&gamma), black_box(alpha)))
    });
}

fn bench_dual_vandermonde(c: &mut Criterion) {
    let nodes = default_nodes(6);
    let rhs: Vec<Complex64> = (0..nodes.len())
        .map(|j| Complex64::new(1.0 / (j as f64 + 1.0), (j as f64).sin()))
        .collect();
    c.bench_function("bp_dual_solve_m6", |b| {
        b.iter(|| bp_dual_solve(black_box(&nodes), black_box(&rhs)).expect("solves"))
    });
}

fn bench_psi_flow(c: &mut Criterion) {
    let prob = short_problem();
    let lambda = Complex64::new(16.0, 0.05);
    let alpha = Complex64::new(1.0, 1.0);
    let settings = IntegratorSettings::default();
    let mut group = c.benchmark_group("flows");
    group.sample_size(20);
    group.bench_function("psi_flow_dirichlet", |b| {
        b.iter(|| {
            compute_psi_for(
                PsiTarget::DirichletM,
                black_box(&prob),
                black_box(lambda),
                alpha,
                &settings,
            )
            .expect("flow completes")
        })
    });
    group.bench_function("evaluate_m_neumann", |b| {
        b.iter(|| {
            evaluate_m(
                black_box(&prob),
                BoundaryCondition::Neumann,
                black_box(lambda),
                alpha,
                &settings,
            )
            .expect("evaluation completes")
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_expr_eval,
    bench_s_blocks,
    bench_gamma_rhs,
    bench_dual_vandermonde,
    bench_psi_flow
);
criterion_main!(benches);
