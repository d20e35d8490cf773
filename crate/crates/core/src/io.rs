//! CSV trajectory files and float formatting.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::chaos::{SeriesKind, TimeSeries};
use crate::error::{Error, Result};

/// `%.17g`-style formatting: 17 significant digits, round-trips every f64.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn header(dim: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    if dim == 3 {
        h.extend(["x", "y", "z"].map(String::from));
    } else {
        h.extend((1..=dim).map(|i| format!("u{i}")));
    }
    h
}

pub fn write_series<W: Write>(series: &TimeSeries, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(series.dim()))?;
    for (i, p) in series.points().enumerate() {
        let mut row = vec![fmt_f64(i as f64 * series.dt())];
        row.extend(p.iter().map(|&v| fmt_f64(v)));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn write_series_file(series: &TimeSeries, path: impl AsRef<Path>) -> Result<()> {
    let f = File::create(path.as_ref()).map_err(|e| Error::io(path.as_ref(), e))?;
    write_series(series, f)
}

/// Reads a `t,...` CSV. `dt` is taken from the first two time stamps, or from
/// `fallback_dt` when the file has a single row.
pub fn read_series<R: std::io::Read>(input: R, kind: SeriesKind, fallback_dt: Option<f64>) -> Result<TimeSeries> {
    let mut r = csv::Reader::from_reader(input);
    let dim = r.headers()?.len().checked_sub(1).filter(|&d| d > 0).ok_or_else(|| {
        Error::InvalidArgument("trajectory CSV needs a t column and at least one value column".into())
    })?;
    let mut times = Vec::new();
    let mut data = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let mut vals = rec
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("not a number: `{s}`"))));
        times.push(vals.next().transpose()?.unwrap_or(f64::NAN));
        for v in vals {
            data.push(v?);
        }
    }
    let dt = match times.as_slice() {
        [t0, t1, ..] => t1 - t0,
        _ => fallback_dt.ok_or_else(|| Error::InvalidArgument("cannot infer dt from fewer than two rows".into()))?,
    };
    TimeSeries::from_flat(dim, dt, data, kind)
}

pub fn read_series_file(path: impl AsRef<Path>, kind: SeriesKind) -> Result<TimeSeries> {
    let f = File::open(path.as_ref()).map_err(|e| Error::io(path.as_ref(), e))?;
    read_series(f, kind, None)
}
