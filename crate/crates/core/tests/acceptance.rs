//! End-to-end acceptance gate. Each test prints one PASS/FAIL line.

use std::time::{Duration, Instant};

use qrc_core::chaos::{generate_dataset, System};
use qrc_core::harness::{emit_report, noise_sweep, run_experiment, table_s1_configs, ReportFormats, RunManifest};
use qrc_core::metrics::{climate, MetricPreset};
use qrc_core::qcore::{ComplexMatrix, DensityMatrix, C64};
use qrc_core::readout::{build_features, ridge_fit, ExperimentConfig};
use qrc_core::reservoir::{
    lindblad_evolve, sample_hamiltonian, Dynamics, IsingParams, LindbladPropagator, ReservoirBank, DEFAULT_SUBSTEPS,
};
use qrc_core::seed::rng_from_seed;
use qrc_core::Execution;
use rand::Rng;

fn verdict(id: u32, name: &str, pass: bool, detail: String) {
    println!("criterion {id} [{name}]: {} | {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

#[test]
fn criterion_1_feature_dimensions() {
    let expected = [31, 241, 51, 101, 301, 161];
    let mut got = Vec::new();
    for h in table_s1_configs() {
        let params = IsingParams::default().with_multiplex(h.v);
        let mut bank = ReservoirBank::sample(&mut rng_from_seed(1), params, h.r, 3, Dynamics::Unitary).unwrap();
        let nodes = bank.step(&[0.3, 0.5, 0.7]).unwrap().to_vec();
        got.push(build_features(&nodes, h.g).len());
    }
    verdict(1, "dim(q)", got == expected, format!("got {got:?}, expected {expected:?}"));
}

#[test]
fn criterion_2_true_attractor_climate() {
    let mut lines = Vec::new();
    let mut pass = true;
    for system in [System::Lorenz63, System::Roessler, System::Chen] {
        let start = Instant::now();
        let preset = MetricPreset::for_system(system);
        let data = generate_dataset(&system.preset(), 100_000, 1000).unwrap();
        let (lambda, dim) = climate(&data, preset, Execution::Parallel);
        let elapsed = start.elapsed();
        let rel = |v: Option<f64>, t: f64| v.map(|v| (v - t) / t);
        let (rl, rd) = (rel(lambda, preset.lambda_true), rel(dim, preset.dim_true));
        let ok = rl.is_some_and(|r| r.abs() <= 0.10)
            && rd.is_some_and(|r| r.abs() <= 0.10)
            && elapsed < Duration::from_secs(120);
        pass &= ok;
        lines.push(format!(
            "{system}: lambda {:.4} ({:+.1}%), dim {:.4} ({:+.1}%), {:.1}s{}",
            lambda.unwrap_or(f64::NAN),
            100.0 * rl.unwrap_or(f64::NAN),
            dim.unwrap_or(f64::NAN),
            100.0 * rd.unwrap_or(f64::NAN),
            elapsed.as_secs_f64(),
            if ok { "" } else { " <- out of tolerance" }
        ));
    }
    verdict(2, "true-attractor lambda/dim within 10%", pass, lines.join("; "));
}

fn lorenz_best_run() -> qrc_core::harness::RunOutcome {
    let mut c = ExperimentConfig::best(System::Lorenz63);
    c.n_stat = 20;
    c.n_sync = 100;
    c.n_train = 2000;
    c.n_pred = 2000;
    run_experiment(&RunManifest::new(c).unwrap()).unwrap()
}

#[test]
fn criterion_3_and_4_lorenz_forecast_and_climate() {
    let out = lorenz_best_run();
    let h = out.summary.forecast_horizon.unwrap();
    verdict(
        3,
        "Lorenz mean horizon >= 7",
        h.mean >= 7.0,
        format!("mean {:.3} +- {:.3} over {} realizations ({} failed)", h.mean, h.std, h.count, out.summary.n_failed),
    );
    let (Some(l), Some(d)) = (out.summary.lambda_max, out.summary.corr_dim) else {
        verdict(4, "Lorenz predicted climate", false, "no realization produced climate metrics".into());
        return;
    };
    let rl = (l.median - 0.91) / 0.91;
    let rd = (d.median - 2.052) / 2.052;
    verdict(
        4,
        "Lorenz median lambda within 15%, dim within 5%",
        rl.abs() <= 0.15 && rd.abs() <= 0.05,
        format!(
            "median lambda {:.4} ({:+.1}%, n={}), median dim {:.4} ({:+.1}%, n={})",
            l.median,
            100.0 * rl,
            l.count,
            d.median,
            100.0 * rd,
            d.count
        ),
    );
}

#[test]
fn criterion_5_beta_sensitivity() {
    let cfg2 = table_s1_configs()[1];
    let mean_at = |beta: f64| {
        let mut c = cfg2.with_beta(beta).apply(&ExperimentConfig::best(System::Lorenz63));
        c.n_stat = 10;
        c.allow_out_of_space = true;
        run_experiment(&RunManifest::new(c).unwrap()).unwrap().summary
    };
    let (tiny, mid, big) = (mean_at(1e-20), mean_at(1e-10), mean_at(1e-1));
    let (t, m, b) = (tiny.mean_horizon(), mid.mean_horizon(), big.mean_horizon());
    verdict(
        5,
        "config 2 horizon peaks at beta=1e-10",
        m > t && m > b,
        format!("beta 1e-20: {t:.3} ({} failed), 1e-10: {m:.3}, 1e-1: {b:.3}", tiny.n_failed),
    );
}

#[test]
fn criterion_6_quantum_core_properties() {
    let params = IsingParams::default().with_multiplex(3);
    let mut rng = rng_from_seed(2024);
    let mut bank = ReservoirBank::sample(&mut rng, params, 1, 3, Dynamics::Unitary).unwrap();
    let (mut herm, mut trace, mut min_eig) = (0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..10_000 {
        let u: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        bank.step(&u).unwrap();
        let d = bank.reservoirs()[0].state.diagnostics();
        herm = herm.max(d.hermiticity_error);
        trace = trace.max(d.trace_error);
        min_eig = min_eig.min(d.min_eigenvalue);
    }
    let u = bank.reservoirs()[0].hamiltonian.substep_unitary();
    let unitarity =
        (&(u * &u.adjoint()) - &ComplexMatrix::identity(16)).as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);

    let q = nalgebra::DMatrix::from_fn(60, 800, |_, _| rng.random_range(-1.0..1.0));
    let w = nalgebra::DMatrix::from_fn(3, 60, |_, _| rng.random_range(-1.0..1.0));
    let fit = ridge_fit(&q, &(&w * &q), 1e-12).unwrap();
    let ridge_err = (fit - w).amax();

    let pass = herm <= 1e-10 && trace <= 1e-10 && min_eig >= -1e-9 && unitarity <= 1e-9 && ridge_err <= 1e-6;
    verdict(
        6,
        "state invariants, unitarity, ridge recovery",
        pass,
        format!(
            "10^4 steps: hermiticity {herm:.2e}, trace {trace:.2e}, min eig {min_eig:.2e}; unitarity {unitarity:.2e}; ridge {ridge_err:.2e}"
        ),
    );
}

#[test]
fn criterion_7_lindblad_dephasing() {
    let spec = sample_hamiltonian(&mut rng_from_seed(77), IsingParams::default().with_multiplex(9)).unwrap();
    let t = spec.params().substep_time();
    let prop = LindbladPropagator::new(spec.matrix(), 0.0, t, DEFAULT_SUBSTEPS).unwrap();
    let mut bank = ReservoirBank::new(vec![spec.clone()], 3, Dynamics::Unitary).unwrap();
    let mut rng = rng_from_seed(78);
    let mut noiseless = 0.0f64;
    for k in 0..20 {
        bank.step(&[rng.random(), rng.random(), rng.random()]).unwrap();
        let rho = bank.reservoirs()[0].state.clone();
        let exact = rho.matrix().conjugate_by(spec.substep_unitary()).unwrap();
        let via = if k % 2 == 0 {
            lindblad_evolve(&rho, spec.matrix(), 0.0, t, DEFAULT_SUBSTEPS).unwrap()
        } else {
            prop.apply(&rho)
        };
        noiseless = noiseless.max(via.matrix().max_abs_diff(&exact).unwrap());
    }

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DensityMatrix::from_pure(&[C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap();
    let mut decay = 0.0f64;
    for (gamma, time) in [(0.01, 5.0), (0.1, 2.0), (0.5, 1.0)] {
        let out = lindblad_evolve(&plus, &ComplexMatrix::zeros(2, 2), gamma, time, 400).unwrap();
        decay = decay.max((out.matrix()[(0, 1)].re - 0.5 * (-2.0 * gamma * time).exp()).abs());
    }

    let c = ExperimentConfig {
        v: 9,
        r: 1,
        g: 4,
        beta: 1.41e-12,
        a: 0.15,
        b: 0.85,
        n_stat: 5,
        n_pred: 1000,
        ..ExperimentConfig::best(System::Lorenz63)
    };
    let points = noise_sweep(&RunManifest::new(c).unwrap(), &[0.0, 1e-4, 1e-2]).unwrap();
    let means: Vec<f64> = points.iter().map(|p| p.summary.mean_horizon()).collect();

    let pass = noiseless <= 1e-7 && decay <= 1e-6 && means.iter().all(|&m| m > 0.0);
    verdict(
        7,
        "Lindblad limits and noise sweep",
        pass,
        format!(
            "gamma=0 vs unitary {noiseless:.2e}; decay {decay:.2e}; mean horizon at gamma 0/1e-4/1e-2: {means:.3?}"
        ),
    );
}

#[test]
fn criterion_8_reports_reproducible() {
    let mut c = ExperimentConfig::best(System::Lorenz63);
    c.n_stat = 4;
    c.n_pred = 1000;
    c.seed = 8;
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut bytes = Vec::new();
    for (k, dir) in dirs.iter().enumerate() {
        let mut m = RunManifest::new(c.clone()).unwrap();
        m.execution = if k == 0 { Execution::Parallel } else { Execution::Sequential };
        let out = run_experiment(&m).unwrap();
        emit_report(
            dir.path(),
            &out.reports,
            &out.summary,
            &m.config,
            &m.preset(),
            ReportFormats { csv: true, svg: false },
        )
        .unwrap();
        bytes.push(std::fs::read(dir.path().join("reports.csv")).unwrap());
    }
    verdict(
        8,
        "reports.csv byte-identical on re-run",
        bytes[0] == bytes[1],
        format!("{} bytes vs {} bytes", bytes[0].len(), bytes[1].len()),
    );
}
