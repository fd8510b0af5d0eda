use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use wdss_core::figures::{figure1_collector, figure1_instance, figure4_params};
use wdss_core::frac::{q, qi};
use wdss_core::rlnc::{run_trial, SimConfig};
use wdss_core::tradeoff::{sweep_curve, Grid};
use wdss_core::model::enumerate_collectors;
use wdss_core::{build_graph, c_lb, instance_capacity, max_flow_min_cut, SystemParams};

fn bound(c: &mut Criterion) {
    let p = figure4_params().with_capacities(q(1, 4), q(1, 14));
    c.bench_function("c_lb k=4 d=9 r=2 T=6", |b| b.iter(|| c_lb(black_box(&p)).unwrap()));
    let big = SystemParams::new(20, 6, 12, 3, qi(1), q(1, 3), 20);
    c.bench_function("c_lb k=6 r=3 T=20", |b| b.iter(|| c_lb(black_box(&big)).unwrap()));
    c.bench_function("sweep k=4 d=9 r=2", |b| {
        b.iter(|| sweep_curve(black_box(&figure4_params()), qi(1), &Grid::Auto).unwrap())
    });
}

fn flows(c: &mut Criterion) {
    let inst = figure1_instance(qi(1), q(1, 4));
    let g = build_graph(&inst, &figure1_collector()).unwrap();
    c.bench_function("max-flow two-round graph", |b| b.iter(|| max_flow_min_cut(black_box(&g))));
    c.bench_function("instance capacity 168 collectors", |b| {
        b.iter(|| instance_capacity(black_box(&inst)).unwrap())
    });
}

fn coding(c: &mut Criterion) {
    let inst = figure1_instance(qi(2), qi(1));
    let dcs: Vec<_> = enumerate_collectors(&inst).collect();
    let cfg = SimConfig::new(inst.params.clone(), 5);
    let mut trial = 0;
    c.bench_function("rlnc trial GF(256)", |b| {
        b.iter(|| {
            trial += 1;
            run_trial(&cfg, &inst, &dcs, trial).unwrap()
        })
    });
}

criterion_group!(benches, bound, flows, coding);
criterion_main!(benches);
