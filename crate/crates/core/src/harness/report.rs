use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{NoisePoint, Stats, Summary, Trial};
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::metrics::{EvaluationReport, MetricPreset};
use crate::readout::ExperimentConfig;

pub const REPORT_HEADER: [&str; 13] = [
    "realization",
    "seed",
    "system",
    "V",
    "r",
    "G",
    "beta",
    "a",
    "b",
    "forecast_horizon_lyap",
    "lambda_max",
    "corr_dim",
    "diverged",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportFormats {
    pub csv: bool,
    pub svg: bool,
}

impl Default for ReportFormats {
    fn default() -> Self {
        Self { csv: true, svg: true }
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_reports_csv<W: Write>(reports: &[EvaluationReport], config: &ExperimentConfig, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in reports {
        w.write_record([
            r.realization.to_string(),
            r.seed.to_string(),
            config.system.name().to_string(),
            config.v.to_string(),
            config.r.to_string(),
            config.g.to_string(),
            fmt_f64(config.beta),
            fmt_f64(config.a),
            fmt_f64(config.b),
            fmt_f64(r.forecast_horizon),
            opt(r.lambda_max),
            opt(r.corr_dim),
            r.diverged.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

fn stat_cells(s: Option<Stats>) -> [String; 3] {
    match s {
        Some(s) => [fmt_f64(s.mean), fmt_f64(s.std), fmt_f64(s.median)],
        None => Default::default(),
    }
}

pub fn write_sweep_csv<W: Write>(trials: &[Trial], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "rank",
        "trial",
        "V",
        "r",
        "G",
        "beta",
        "a",
        "b",
        "mean_horizon",
        "std_horizon",
        "median_horizon",
        "n_diverged",
    ])?;
    for (rank, t) in trials.iter().enumerate() {
        let h = t.hyper;
        let [mean, std, median] = stat_cells(t.summary.forecast_horizon);
        w.write_record([
            rank.to_string(),
            t.trial.to_string(),
            h.v.to_string(),
            h.r.to_string(),
            h.g.to_string(),
            fmt_f64(h.beta),
            fmt_f64(h.a),
            fmt_f64(h.b),
            mean,
            std,
            median,
            t.summary.n_diverged.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn write_noise_csv<W: Write>(points: &[NoisePoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["gamma", "mean_horizon", "std_horizon", "median_horizon", "n_diverged"])?;
    for p in points {
        let [mean, std, median] = stat_cells(p.summary.forecast_horizon);
        w.write_record([fmt_f64(p.gamma), mean, std, median, p.summary.n_diverged.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

const W: f64 = 480.0;
const H: f64 = 360.0;
const MARGIN: f64 = 56.0;

struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
    (lo - 0.05 * span, hi + 0.05 * span)
}

fn svg_open(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">{title}</text>"#,
        W / 2.0
    );
    s
}

fn frame(s: &mut String, x: &Axis, y: &Axis, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let yv = y.lo + f * (y.hi - y.lo);
        let py = y.map(yv);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">{:.3}</text>"#,
            MARGIN - 4.0,
            py + 3.0,
            yv
        );
        if x.hi > x.lo {
            let xv = x.lo + f * (x.hi - x.lo);
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{:.3}</text>"#,
                x.map(xv),
                H - MARGIN + 14.0,
                xv
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{xlabel}</text>"#,
        W / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{ylabel}</text>"#,
        H / 2.0,
        H / 2.0
    );
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (i, f) = (pos.floor() as usize, pos.fract());
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - f) + sorted[i + 1] * f
    } else {
        sorted[i]
    }
}

/// Box-and-whisker plot of the forecast horizons (whiskers at min and max).
pub fn horizon_box_svg(reports: &[EvaluationReport], title: &str) -> String {
    let mut v: Vec<f64> = reports.iter().map(|r| r.forecast_horizon).collect();
    v.sort_by(f64::total_cmp);
    let mut s = svg_open(title);
    if v.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let (lo, hi) = padded(v[0].min(0.0), v[v.len() - 1]);
    let y = Axis { lo, hi, px_lo: H - MARGIN, px_hi: MARGIN };
    let x = Axis { lo: 0.0, hi: 0.0, px_lo: MARGIN, px_hi: W - MARGIN };
    frame(&mut s, &x, &y, "", "forecast horizon (Lyapunov times)");
    let cx = W / 2.0;
    let half = 50.0;
    let (q1, med, q3) = (quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75));
    let (mn, mx) = (v[0], v[v.len() - 1]);
    let _ = writeln!(s, r#"<line x1="{cx}" y1="{:.2}" x2="{cx}" y2="{:.2}" stroke="black"/>"#, y.map(mn), y.map(q1));
    let _ = writeln!(s, r#"<line x1="{cx}" y1="{:.2}" x2="{cx}" y2="{:.2}" stroke="black"/>"#, y.map(q3), y.map(mx));
    for w in [mn, mx] {
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{:.2}" x2="{}" y2="{:.2}" stroke="black"/>"#,
            cx - half / 2.0,
            y.map(w),
            cx + half / 2.0,
            y.map(w)
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{}" y="{:.2}" width="{}" height="{:.2}" fill="lightsteelblue" stroke="black"/>"#,
        cx - half,
        y.map(q3),
        2.0 * half,
        (y.map(q1) - y.map(q3)).max(0.5)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{:.2}" x2="{}" y2="{:.2}" stroke="darkred" stroke-width="2"/>"#,
        cx - half,
        y.map(med),
        cx + half,
        y.map(med)
    );
    for (k, h) in v.iter().enumerate() {
        let jitter = (k % 7) as f64 * 6.0 - 18.0;
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="black" fill-opacity="0.5"/>"#,
            cx + 80.0 + jitter,
            y.map(*h)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// λ_max against υ per realization, with the reference cross-hair and ±3σ box.
/// The axes always include the reference mean ± 5σ.
pub fn climate_scatter_svg(reports: &[EvaluationReport], preset: &MetricPreset, title: &str) -> String {
    let pts: Vec<(f64, f64)> = reports.iter().filter_map(|r| Some((r.lambda_max?, r.corr_dim?))).collect();
    let (lx, ly, sx, sy) = (preset.lambda_true, preset.dim_true, preset.lambda_std, preset.dim_std);
    let fold =
        |init: (f64, f64), vals: &mut dyn Iterator<Item = f64>| vals.fold(init, |(a, b), v| (a.min(v), b.max(v)));
    let (x0, x1) = fold((lx - 5.0 * sx, lx + 5.0 * sx), &mut pts.iter().map(|p| p.0));
    let (y0, y1) = fold((ly - 5.0 * sy, ly + 5.0 * sy), &mut pts.iter().map(|p| p.1));
    let (x0, x1) = padded(x0, x1);
    let (y0, y1) = padded(y0, y1);
    let x = Axis { lo: x0, hi: x1, px_lo: MARGIN, px_hi: W - MARGIN };
    let y = Axis { lo: y0, hi: y1, px_lo: H - MARGIN, px_hi: MARGIN };
    let mut s = svg_open(title);
    frame(&mut s, &x, &y, "largest Lyapunov exponent", "correlation dimension");
    let _ = writeln!(
        s,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="darkred" stroke-dasharray="4 3"/>"#,
        x.map(lx - 3.0 * sx),
        y.map(ly + 3.0 * sy),
        x.map(lx + 3.0 * sx) - x.map(lx - 3.0 * sx),
        y.map(ly - 3.0 * sy) - y.map(ly + 3.0 * sy)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{MARGIN}" x2="{:.2}" y2="{}" stroke="darkred"/>"#,
        x.map(lx),
        x.map(lx),
        H - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{:.2}" x2="{}" y2="{:.2}" stroke="darkred"/>"#,
        y.map(ly),
        W - MARGIN,
        y.map(ly)
    );
    for (px, py) in pts {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue" fill-opacity="0.7"/>"#,
            x.map(px),
            y.map(py)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Write `reports.csv`, `summary.json` and, if requested, the two SVG figures into `dir`.
pub fn emit_report(
    dir: &Path,
    reports: &[EvaluationReport],
    summary: &Summary,
    config: &ExperimentConfig,
    preset: &MetricPreset,
    formats: ReportFormats,
) -> Result<Vec<PathBuf>> {
    if reports.is_empty() {
        return Err(Error::InvalidArgument("no reports to emit".into()));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    if formats.csv {
        let mut buf = Vec::new();
        write_reports_csv(reports, config, &mut buf)?;
        let path = dir.join("reports.csv");
        write_file(&path, &buf)?;
        written.push(path);
        let path = dir.join("summary.json");
        write_file(&path, serde_json::to_string_pretty(summary)?.as_bytes())?;
        written.push(path);
    }
    if formats.svg {
        let name = config.system.name();
        let path = dir.join("horizon_box.svg");
        write_file(&path, horizon_box_svg(reports, &format!("{name}: forecast horizon")).as_bytes())?;
        written.push(path);
        let path = dir.join("climate_scatter.svg");
        write_file(&path, climate_scatter_svg(reports, preset, &format!("{name}: climate")).as_bytes())?;
        written.push(path);
    }
    Ok(written)
}
