use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qrc_core::chaos::{generate_dataset, SeriesKind, System};
use qrc_core::harness::{
    emit_report, noise_sweep, run_experiment, sweep, write_noise_csv, write_sweep_csv, ReportFormats, RunManifest,
    RunOutcome, SweepSpec,
};
use qrc_core::io::{read_series_file, write_series_file};
use qrc_core::metrics::{evaluate, load_presets, MetricPreset};
use qrc_core::readout::{predict_closed_loop, train, ExperimentConfig, Prediction, TrainedModel};
use qrc_core::reservoir::{Dynamics, DEFAULT_SUBSTEPS};
use qrc_core::seed::{derive_seed, rng_from_seed};
use qrc_core::Execution;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "qrc", version, about = "Quantum reservoir forecasting of chaotic flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a flow and write its trajectory as CSV.
    Generate(GenerateArgs),
    /// Fit a readout on a trajectory CSV and save it as JSON.
    Train(TrainArgs),
    /// Forecast in closed loop from a saved model.
    Predict(PredictArgs),
    /// Score a prediction CSV against a truth CSV.
    Evaluate(EvaluateArgs),
    /// Run all realizations of an experiment and write reports.
    Run(RunArgs),
    /// Hyperparameter search.
    Sweep(SweepArgs),
    /// Repeat a run under Lindblad dephasing for several rates.
    #[command(name = "noise-sweep")]
    NoiseSweep(NoiseArgs),
    /// Re-render CSV and SVG reports from a saved outcome.json.
    Report(ReportArgs),
}

/// Experiment settings. A JSON file (a config or a whole manifest) is read first,
/// then each flag overrides the field of the same name.
#[derive(Args, Clone, Default)]
struct ConfigArgs {
    /// JSON with any subset of the config fields, or a full run manifest.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    system: Option<System>,
    #[arg(long = "V")]
    v: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long = "G")]
    g: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long = "n_sync")]
    n_sync: Option<usize>,
    #[arg(long = "n_train")]
    n_train: Option<usize>,
    #[arg(long = "n_pred")]
    n_pred: Option<usize>,
    #[arg(long = "n_stat")]
    n_stat: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Dephasing rate; switches the reservoirs to Lindblad dynamics.
    #[arg(long)]
    gamma: Option<f64>,
    /// RK4 substeps per interval for Lindblad dynamics.
    #[arg(long)]
    substeps: Option<usize>,
    #[arg(long = "allow_out_of_space")]
    allow_out_of_space: bool,
    #[arg(long = "e_max")]
    e_max: Option<f64>,
    /// Metric preset table (JSON keyed by system) replacing the built-in one.
    #[arg(long)]
    metrics: Option<PathBuf>,
    #[arg(long, value_parser = parse_execution)]
    execution: Option<Execution>,
}

fn parse_execution(s: &str) -> Result<Execution, String> {
    match s {
        "parallel" => Ok(Execution::Parallel),
        "sequential" => Ok(Execution::Sequential),
        _ => Err(format!("expected parallel or sequential, got {s}")),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn merge(base: &mut Value, over: &Value) {
    if let (Value::Object(b), Value::Object(o)) = (base, over) {
        for (k, v) in o {
            b.insert(k.clone(), v.clone());
        }
    }
}

impl ConfigArgs {
    fn manifest(&self) -> Result<RunManifest> {
        let file = self.config.as_deref().map(read_json).transpose()?;
        let (file_config, file_manifest) = match &file {
            Some(v) if v.get("config").is_some() => (v["config"].clone(), Some(v.clone())),
            Some(v) => (v.clone(), None),
            None => (json!({}), None),
        };
        let system = match self.system {
            Some(s) => s,
            None => match file_config.get("system") {
                Some(s) => serde_json::from_value(s.clone())?,
                None => System::Lorenz63,
            },
        };
        let mut value = serde_json::to_value(ExperimentConfig::best(system))?;
        merge(&mut value, &file_config);
        merge(&mut value, &json!({ "system": system }));
        let mut config: ExperimentConfig = serde_json::from_value(value).context("invalid experiment config")?;
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(x) = self.$f { config.$f = x; } )* };
        }
        set!(v, r, g, beta, a, b, n_sync, n_train, n_pred, n_stat, seed);
        if self.allow_out_of_space {
            config.allow_out_of_space = true;
        }
        if self.gamma.is_some() || self.substeps.is_some() {
            let (g0, s0) = match config.dynamics {
                Dynamics::Dephasing { gamma, substeps } => (gamma, substeps),
                Dynamics::Unitary => (0.0, DEFAULT_SUBSTEPS),
            };
            config.dynamics =
                Dynamics::Dephasing { gamma: self.gamma.unwrap_or(g0), substeps: self.substeps.unwrap_or(s0) };
        }
        let mut manifest = match file_manifest {
            Some(m) => {
                let mut m: RunManifest = serde_json::from_value(m).context("invalid run manifest")?;
                if m.dataset.flow.system() != config.system {
                    m.dataset = RunManifest::new(config.clone())?.dataset;
                }
                m.config = config;
                m.reseed();
                m
            }
            None => RunManifest::new(config)?,
        };
        if let Some(e) = self.e_max {
            manifest.e_max = e;
        }
        if let Some(path) = &self.metrics {
            let table = load_presets(path)?;
            manifest.metrics = Some(table[&manifest.config.system].clone());
        }
        if let Some(exec) = self.execution {
            manifest.execution = exec;
        }
        manifest.validate()?;
        Ok(manifest)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value = "lorenz63")]
    system: System,
    /// Points kept after the transient.
    #[arg(long, default_value_t = 20_000)]
    steps: usize,
    #[arg(long, default_value_t = 1000)]
    discard: usize,
    /// Integration step; defaults to the system preset.
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Trajectory CSV; the first n_sync + n_train points are used.
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    #[arg(long, default_value = "lorenz63")]
    system: System,
    #[arg(long = "e_max")]
    e_max: Option<f64>,
    #[arg(long)]
    metrics: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long = "no_svg")]
    no_svg: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Sweep specification JSON.
    #[arg(long, conflicts_with = "table_s1")]
    sweep: Option<PathBuf>,
    /// Grid over the six reference configurations at beta in {1e-1, 1e-3, 1e-10, 1e-20}.
    #[arg(long = "table_s1")]
    table_s1: bool,
    #[arg(long)]
    budget: Option<usize>,
    /// Realizations per trial.
    #[arg(long = "trial_n_stat")]
    trial_n_stat: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct NoiseArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1e-4, 1e-3, 1e-2])]
    gammas: Vec<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// outcome.json written by `run`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long = "no_svg")]
    no_svg: bool,
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn print_summary(label: &str, outcome: &RunOutcome) {
    let s = &outcome.summary;
    let fmt = |st: Option<qrc_core::harness::Stats>| {
        st.map_or("n/a".to_string(), |s| {
            format!("{:.4} +- {:.4} (median {:.4}, n={})", s.mean, s.std, s.median, s.count)
        })
    };
    println!("{label}: {} realizations, {} diverged, {} failed", s.n_realizations, s.n_diverged, s.n_failed);
    println!("  forecast horizon: {}", fmt(s.forecast_horizon));
    println!("  lambda_max:       {}", fmt(s.lambda_max));
    println!("  corr_dim:         {}", fmt(s.corr_dim));
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate(a) => {
            let mut flow = a.system.preset();
            if let Some(dt) = a.dt {
                flow = flow.with_dt(dt)?;
            }
            let series = generate_dataset(&flow, a.steps, a.discard)?;
            write_series_file(&series, &a.out)?;
            println!("wrote {} points of {} to {}", series.len(), a.system, a.out.display());
        }
        Command::Train(a) => {
            let manifest = a.cfg.manifest()?;
            let data = read_series_file(&a.data, SeriesKind::Raw)?;
            let seed = derive_seed(manifest.config.seed, "realization", 0);
            let (model, bank) = train(&data, &manifest.config, &mut rng_from_seed(seed))?;
            write_json(&a.out, &TrainedModel { model, bank })?;
            println!("wrote model to {}", a.out.display());
        }
        Command::Predict(a) => {
            let text = fs::read_to_string(&a.model).with_context(|| format!("reading {}", a.model.display()))?;
            let TrainedModel { model, mut bank } = serde_json::from_str(&text).context("invalid model file")?;
            let Prediction { series, diverged } = predict_closed_loop(&model, &mut bank, a.steps)?;
            write_series_file(&series, &a.out)?;
            match diverged {
                Some(step) => println!("prediction diverged at step {step}; wrote {} points", series.len()),
                None => println!("wrote {} predicted points to {}", series.len(), a.out.display()),
            }
        }
        Command::Evaluate(a) => {
            let truth = read_series_file(&a.truth, SeriesKind::Raw)?;
            let pred = read_series_file(&a.pred, SeriesKind::Predicted)?;
            let preset = match &a.metrics {
                Some(p) => load_presets(p)?[&a.system].clone(),
                None => MetricPreset::for_system(a.system).clone(),
            };
            let prediction = Prediction { series: pred, diverged: None };
            let report = evaluate(&prediction, &truth, &preset, a.e_max, Execution::Parallel)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Run(a) => {
            let mut manifest = a.cfg.manifest()?;
            manifest.output_dir = Some(a.out.clone());
            create_dir(&a.out)?;
            write_json(&a.out.join("manifest.json"), &manifest)?;
            let outcome = run_experiment(&manifest)?;
            let formats = ReportFormats { csv: true, svg: !a.no_svg };
            emit_report(&a.out, &outcome.reports, &outcome.summary, &manifest.config, &manifest.preset(), formats)?;
            write_json(&a.out.join("failures.json"), &outcome.failures)?;
            write_json(
                &a.out.join("outcome.json"),
                &json!({ "config": manifest.config, "preset": manifest.preset(), "outcome": outcome }),
            )?;
            print_summary(&manifest.config.system.to_string(), &outcome);
            println!("reports in {}", a.out.display());
        }
        Command::Sweep(a) => {
            let base = a.cfg.manifest()?;
            let mut spec: SweepSpec = match (&a.sweep, a.table_s1) {
                (Some(p), _) => serde_json::from_value(read_json(p)?).context("invalid sweep spec")?,
                (None, true) => SweepSpec::table_s1_beta_grid(5),
                (None, false) => SweepSpec::default(),
            };
            if let Some(b) = a.budget {
                spec.budget = b;
            }
            if let Some(n) = a.trial_n_stat {
                spec.n_stat = n;
            }
            let mut base = base;
            if a.table_s1 {
                base.config.allow_out_of_space = true;
            }
            let trials = sweep(&spec, &base)?;
            create_dir(&a.out)?;
            let mut buf = Vec::new();
            write_sweep_csv(&trials, &mut buf)?;
            fs::write(a.out.join("sweep.csv"), buf).context("writing sweep.csv")?;
            write_json(&a.out.join("sweep.json"), &json!({ "spec": spec, "base": base, "trials": trials }))?;
            for t in trials.iter().take(10) {
                let h = t.hyper;
                println!(
                    "trial {:>3}: V={:<2} r={} G={} beta={:.3e} [a,b]=[{:.2},{:.2}] mean horizon {:.3}",
                    t.trial,
                    h.v,
                    h.r,
                    h.g,
                    h.beta,
                    h.a,
                    h.b,
                    t.summary.mean_horizon()
                );
            }
            println!("{} trials written to {}", trials.len(), a.out.join("sweep.csv").display());
        }
        Command::NoiseSweep(a) => {
            let base = a.cfg.manifest()?;
            if base.config.r != 1 {
                bail!("noise-sweep needs --r 1 (got r = {})", base.config.r);
            }
            let points = noise_sweep(&base, &a.gammas)?;
            create_dir(&a.out)?;
            let mut buf = Vec::new();
            write_noise_csv(&points, &mut buf)?;
            fs::write(a.out.join("noise.csv"), buf).context("writing noise.csv")?;
            write_json(&a.out.join("noise.json"), &json!({ "base": base, "points": points }))?;
            for p in &points {
                println!("gamma {:.3e}: mean horizon {:.3}", p.gamma, p.summary.mean_horizon());
            }
        }
        Command::Report(a) => {
            let saved = read_json(&a.input)?;
            let config: ExperimentConfig = serde_json::from_value(saved["config"].clone()).context("config")?;
            let preset: MetricPreset = serde_json::from_value(saved["preset"].clone()).context("preset")?;
            let outcome: RunOutcome = serde_json::from_value(saved["outcome"].clone()).context("outcome")?;
            let formats = ReportFormats { csv: true, svg: !a.no_svg };
            for f in emit_report(&a.out, &outcome.reports, &outcome.summary, &config, &preset, formats)? {
                println!("wrote {}", f.display());
            }
        }
    }
    Ok(())
}
