use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use skyscraper_bench::{module, uniquely_generated};
use skyscraper_core::cheng::{hn_cheng, ChengConfig};
use skyscraper_core::grmat::{int, rat, Degree, Grid};
use skyscraper_core::hn_core::{brute_force_max_slope, hn_filtration_at};
use skyscraper_core::pipeline::{approx_skyscraper, parallel_grid_scan, ScanConfig};
use skyscraper_core::subdivision::exact_hnf_cell;

fn brute_force(c: &mut Criterion) {
    let mut g = c.benchmark_group("brute_force_max_slope");
    g.sample_size(10);
    for t in 2..=6 {
        let m = uniquely_generated(2, t, t as u64);
        g.bench_with_input(BenchmarkId::from_parameter(t), &m, |b, m| b.iter(|| brute_force_max_slope(m).unwrap()));
    }
    g.finish();
}

fn single_degree(c: &mut Criterion) {
    let mut g = c.benchmark_group("hn_at_generator");
    g.sample_size(10);
    for t in 2..=3 {
        let m = uniquely_generated(2, t, 100 + t as u64);
        let alpha = m.generated_at().expect("uniquely generated");
        let grid =
            Grid::regular(Degree::zero(), Degree::ints(4, 4), int(1)).union(&Grid::new(vec![alpha.x], vec![alpha.y]));
        let cell = m.induced_grid().cell(0, 0);
        g.bench_with_input(BenchmarkId::new("brute", t), &m, |b, m| b.iter(|| hn_filtration_at(m, &alpha).unwrap()));
        g.bench_with_input(BenchmarkId::new("cheng", t), &m, |b, m| {
            b.iter(|| hn_cheng(m, &grid, &alpha, &ChengConfig::default()).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("exact_cell", t), &m, |b, m| b.iter(|| exact_hnf_cell(m, &cell).unwrap()));
    }
    g.finish();
}

fn stores(c: &mut Criterion) {
    let mut g = c.benchmark_group("store");
    g.sample_size(10);
    let m = module(3, 4, 7);
    for (name, eps) in [("1", int(1)), ("1/2", rat(1, 2)), ("1/4", rat(1, 4))] {
        let cfg = ScanConfig { epsilon: eps, ..ScanConfig::default() };
        g.bench_with_input(BenchmarkId::new("approx", name), &cfg, |b, cfg| {
            b.iter(|| approx_skyscraper(&m, cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("scan", name), &cfg, |b, cfg| {
            b.iter(|| parallel_grid_scan(&m, cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, brute_force, single_degree, stores);
criterion_main!(benches);
