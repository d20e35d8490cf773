//! The eight benchmark flows, fixed-step RK4 and dataset slicing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinates beyond this magnitude are treated as a blown-up integration.
pub const DIVERGENCE_BOUND: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Lorenz63,
    Chen,
    Chua,
    Halvorsen,
    Roessler,
    Rucklidge,
    Thomas,
    Windmi,
}

impl System {
    pub const ALL: [System; 8] = [
        System::Lorenz63,
        System::Chen,
        System::Chua,
        System::Halvorsen,
        System::Roessler,
        System::Rucklidge,
        System::Thomas,
        System::Windmi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            System::Lorenz63 => "lorenz63",
            System::Chen => "chen",
            System::Chua => "chua",
            System::Halvorsen => "halvorsen",
            System::Roessler => "roessler",
            System::Rucklidge => "rucklidge",
            System::Thomas => "thomas",
            System::Windmi => "windmi",
        }
    }

    /// Parameter names of the defining equations, in canonical order.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            System::Lorenz63 => &["rho", "sigma", "beta"],
            System::Chen => &["a", "b", "c"],
            System::Chua => &["alpha", "beta", "a", "b"],
            System::Halvorsen => &["a"],
            System::Roessler => &["a", "b", "c"],
            System::Rucklidge => &["kappa", "lambda"],
            System::Thomas => &["b"],
            System::Windmi => &["a", "b"],
        }
    }

    /// Standard parameters, step size and initial state.
    pub fn preset(self) -> FlowSpec {
        let (params, dt, init): (&[f64], f64, [f64; 3]) = match self {
            System::Lorenz63 => (&[28.0, 10.0, 8.0 / 3.0], 0.02, [0.0, -0.01, 9.0]),
            System::Chen => (&[35.0, 3.0, 28.0], 0.02, [-10.0, 0.0, 37.0]),
            System::Chua => (&[9.0, 100.0 / 7.0, 8.0 / 7.0, 5.0 / 7.0], 0.1, [0.0, 0.0, 0.6]),
            System::Halvorsen => (&[1.27], 0.05, [-5.0, 0.0, 0.0]),
            System::Roessler => (&[0.2, 0.2, 5.7], 0.1, [-9.0, 0.0, 0.0]),
            System::Rucklidge => (&[2.0, 6.7], 0.1, [1.0, 0.0, 4.5]),
            System::Thomas => (&[0.18], 0.3, [0.1, 0.0, 0.0]),
            System::Windmi => (&[0.7, 2.5], 0.2, [0.0, 0.8, 0.0]),
        };
        let map = self.parameter_names().iter().zip(params).map(|(n, &v)| (n.to_string(), v)).collect();
        FlowSpec::new(self, map, dt, init).expect("preset parameters are valid")
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['-', '_'], "");
        let sys = match key.as_str() {
            "lorenz63" | "lorenz" => System::Lorenz63,
            "chen" => System::Chen,
            "chua" => System::Chua,
            "halvorsen" => System::Halvorsen,
            "roessler" | "rossler" | "rössler" => System::Roessler,
            "rucklidge" => System::Rucklidge,
            "thomas" => System::Thomas,
            "windmi" => System::Windmi,
            _ => return Err(Error::UnknownSystem(s.to_string())),
        };
        Ok(sys)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Flow {
    Lorenz63 { rho: f64, sigma: f64, beta: f64 },
    Chen { a: f64, b: f64, c: f64 },
    Chua { alpha: f64, beta: f64, a: f64, b: f64 },
    Halvorsen { a: f64 },
    Roessler { a: f64, b: f64, c: f64 },
    Rucklidge { kappa: f64, lambda: f64 },
    Thomas { b: f64 },
    Windmi { a: f64, b: f64 },
}

#[derive(Serialize, Deserialize)]
struct FlowSpecRepr {
    system: System,
    parameters: BTreeMap<String, f64>,
    dt: f64,
    initial_state: [f64; 3],
}

/// A flow, its parameters, integration step and starting point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FlowSpecRepr", into = "FlowSpecRepr")]
pub struct FlowSpec {
    system: System,
    parameters: BTreeMap<String, f64>,
    dt: f64,
    initial_state: [f64; 3],
    flow: Flow,
}

impl FlowSpec {
    pub fn new(system: System, parameters: BTreeMap<String, f64>, dt: f64, initial_state: [f64; 3]) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        let expected = system.parameter_names();
        let mut names: Vec<&str> = parameters.keys().map(String::as_str).collect();
        let mut want = expected.to_vec();
        names.sort_unstable();
        want.sort_unstable();
        if names != want {
            return Err(Error::BadParameters {
                system: system.to_string(),
                detail: format!("expected {:?}, got {:?}", expected, names),
            });
        }
        let p = |n: &str| parameters[n];
        let flow = match system {
            System::Lorenz63 => Flow::Lorenz63 { rho: p("rho"), sigma: p("sigma"), beta: p("beta") },
            System::Chen => Flow::Chen { a: p("a"), b: p("b"), c: p("c") },
            System::Chua => Flow::Chua { alpha: p("alpha"), beta: p("beta"), a: p("a"), b: p("b") },
            System::Halvorsen => Flow::Halvorsen { a: p("a") },
            System::Roessler => Flow::Roessler { a: p("a"), b: p("b"), c: p("c") },
            System::Rucklidge => Flow::Rucklidge { kappa: p("kappa"), lambda: p("lambda") },
            System::Thomas => Flow::Thomas { b: p("b") },
            System::Windmi => Flow::Windmi { a: p("a"), b: p("b") },
        };
        Ok(Self { system, parameters, dt, initial_state, flow })
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn parameters(&self) -> &BTreeMap<String, f64> {
        &self.parameters
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn initial_state(&self) -> [f64; 3] {
        self.initial_state
    }

    pub fn with_dt(mut self, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        self.dt = dt;
        Ok(self)
    }

    pub fn with_initial_state(mut self, state: [f64; 3]) -> Self {
        self.initial_state = state;
        self
    }
}

impl TryFrom<FlowSpecRepr> for FlowSpec {
    type Error = Error;

    fn try_from(r: FlowSpecRepr) -> Result<Self> {
        FlowSpec::new(r.system, r.parameters, r.dt, r.initial_state)
    }
}

impl From<FlowSpec> for FlowSpecRepr {
    fn from(s: FlowSpec) -> Self {
        FlowSpecRepr { system: s.system, parameters: s.parameters, dt: s.dt, initial_state: s.initial_state }
    }
}

/// Right-hand side `F(u)` of the flow.
pub fn flow_eval(spec: &FlowSpec, s: [f64; 3]) -> [f64; 3] {
    let [x, y, z] = s;
    match spec.flow {
        Flow::Lorenz63 { rho, sigma, beta } => [sigma * (y - x), x * (rho - z) - y, x * y - beta * z],
        Flow::Chen { a, b, c } => [a * (y - x), (c - a) * x - x * z + c * y, x * y - b * z],
        Flow::Chua { alpha, beta, a, b } => {
            [alpha * (y - x + b * x + 0.5 * (a - b) * ((x + 1.0).abs() - (x - 1.0).abs())), x - y + z, -beta * y]
        }
        Flow::Halvorsen { a } => {
            [-a * x - 4.0 * y - 4.0 * z - y * y, -a * y - 4.0 * z - 4.0 * x - z * z, -a * z - 4.0 * x - 4.0 * y - x * x]
        }
        Flow::Roessler { a, b, c } => [-y - z, x + a * y, b + z * (x - c)],
        Flow::Rucklidge { kappa, lambda } => [-kappa * x + lambda * y - y * z, x, -z + y * y],
        Flow::Thomas { b } => [-b * x + y.sin(), -b * y + z.sin(), -b * z + x.sin()],
        Flow::Windmi { a, b } => [y, z, -a * z - y + b - x.exp()],
    }
}

/// Classic RK4 step of size `dt` for an arbitrary autonomous vector field.
pub fn rk4<const D: usize>(f: impl Fn([f64; D]) -> [f64; D], s: [f64; D], dt: f64) -> [f64; D] {
    let axpy = |a: [f64; D], h: f64, k: [f64; D]| -> [f64; D] {
        let mut out = a;
        for i in 0..D {
            out[i] += h * k[i];
        }
        out
    };
    let k1 = f(s);
    let k2 = f(axpy(s, 0.5 * dt, k1));
    let k3 = f(axpy(s, 0.5 * dt, k2));
    let k4 = f(axpy(s, dt, k3));
    let mut out = s;
    for i in 0..D {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// One RK4 step with the spec's `dt`; non-finite results are reported as divergence at step 0.
pub fn rk4_step(spec: &FlowSpec, state: [f64; 3]) -> Result<[f64; 3]> {
    let next = rk4(|s| flow_eval(spec, s), state, spec.dt);
    if next.iter().all(|v| v.is_finite()) {
        Ok(next)
    } else {
        Err(Error::Diverged { step: 0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    #[default]
    Raw,
    Scaled,
    Predicted,
}

/// Uniformly sampled `dim`-dimensional trajectory, stored point-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    dim: usize,
    dt: f64,
    data: Vec<f64>,
    pub kind: SeriesKind,
}

impl TimeSeries {
    /// Empty series is allowed only for predictions of length zero.
    pub fn from_flat(dim: usize, dt: f64, data: Vec<f64>, kind: SeriesKind) -> Result<Self> {
        if dim == 0 || !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch(format!(
                "{} values cannot form points of dimension {dim}",
                data.len()
            )));
        }
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        Ok(Self { dim, dt, data, kind })
    }

    pub fn from_points(points: &[Vec<f64>], dt: f64, kind: SeriesKind) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidArgument("time series needs at least one point".into()))?;
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch("points have differing dimension".into()));
        }
        Self::from_flat(dim, dt, points.concat(), kind)
    }

    pub fn empty(dim: usize, dt: f64, kind: SeriesKind) -> Self {
        Self { dim, dt, data: Vec::new(), kind }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn push(&mut self, point: &[f64]) {
        assert_eq!(point.len(), self.dim, "point dimension");
        self.data.extend_from_slice(point);
    }

    /// Points `start..start+len` as a new series.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self> {
        if start + len > self.len() {
            return Err(Error::SeriesTooShort { required: start + len, available: self.len() });
        }
        Ok(Self {
            dim: self.dim,
            dt: self.dt,
            data: self.data[start * self.dim..(start + len) * self.dim].to_vec(),
            kind: self.kind,
        })
    }

    /// All values of one coordinate.
    pub fn component(&self, d: usize) -> Vec<f64> {
        self.points().map(|p| p[d]).collect()
    }

    pub fn reversed(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for p in self.points().rev() {
            data.extend_from_slice(p);
        }
        Self { data, ..self.clone() }
    }
}

/// Integrate from the initial state, drop the first `discard` points, keep `total_steps`.
pub fn generate_dataset(spec: &FlowSpec, total_steps: usize, discard: usize) -> Result<TimeSeries> {
    if total_steps == 0 {
        return Err(Error::InvalidArgument("total_steps must be positive".into()));
    }
    let mut series =
        TimeSeries { dim: 3, dt: spec.dt, data: Vec::with_capacity(3 * total_steps), kind: SeriesKind::Raw };
    let mut state = spec.initial_state;
    let n_points = total_steps + discard;
    for step in 0..n_points {
        if step > 0 {
            state = rk4(|s| flow_eval(spec, s), state, spec.dt);
            if state.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_BOUND) {
                return Err(Error::Diverged { step });
            }
        }
        if step >= discard {
            series.data.extend_from_slice(&state);
        }
    }
    Ok(series)
}

/// Windows of `traj_len` points starting at `i * stride`, `i in 0..n_traj`.
pub fn split_trajectories(
    series: &TimeSeries,
    n_traj: usize,
    traj_len: usize,
    stride: usize,
) -> Result<Vec<TimeSeries>> {
    if n_traj == 0 || traj_len == 0 {
        return Err(Error::InvalidArgument("need at least one non-empty trajectory".into()));
    }
    if stride == 0 && n_traj > 1 {
        return Err(Error::InvalidArgument("stride must be positive".into()));
    }
    let required = (n_traj - 1) * stride + traj_len;
    if series.len() < required {
        return Err(Error::SeriesTooShort { required, available: series.len() });
    }
    (0..n_traj).map(|i| series.slice(i * stride, traj_len)).collect()
}
