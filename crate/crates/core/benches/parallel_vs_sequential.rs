use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qrc_core::chaos::{generate_dataset, System};
use qrc_core::harness::{run_experiment, RunManifest};
use qrc_core::metrics::{correlation_sums, divergence_curve, MetricPreset};
use qrc_core::readout::ExperimentConfig;
use qrc_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn realizations(c: &mut Criterion) {
    let mut cfg = ExperimentConfig::best(System::Lorenz63);
    cfg.n_stat = 8;
    cfg.n_train = 1000;
    cfg.n_pred = 1000;
    let mut group = c.benchmark_group("run_experiment");
    group.sample_size(10);
    for (name, exec) in MODES {
        let mut manifest = RunManifest::new(cfg.clone()).unwrap();
        manifest.execution = exec;
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_experiment(black_box(&manifest)).unwrap())
        });
    }
    group.finish();
}

fn climate_metrics(c: &mut Criterion) {
    let data = generate_dataset(&System::Lorenz63.preset(), 20_000, 1000).unwrap();
    let preset = MetricPreset::for_system(System::Lorenz63);
    let theiler = preset.theiler(&data).unwrap();
    let corr = preset.corr_dim_params(theiler);
    let ros = preset.rosenstein_params(data.dt(), theiler);

    let mut group = c.benchmark_group("correlation_sums");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| correlation_sums(black_box(&data), &corr, exec).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("rosenstein_divergence");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| divergence_curve(black_box(&data), &ros, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, realizations, climate_metrics);
criterion_main!(benches);
