use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("qubit site {site} out of range 1..={n_qubits}")]
    SiteOutOfRange { site: usize, n_qubits: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown system identifier `{0}`")]
    UnknownSystem(String),

    #[error("parameter set does not match system {system}: {detail}")]
    BadParameters { system: String, detail: String },

    #[error("trajectory diverged at step {step}")]
    Diverged { step: usize },

    #[error("series too short: need {required} points, have {available}")]
    SeriesTooShort { required: usize, available: usize },

    #[error("dimension {dim} has zero variance")]
    ConstantDimension { dim: usize },

    #[error("input value {value} outside [0, 1]")]
    InputOutOfRange { value: f64 },

    #[error("Lindblad integrator step too large (min eigenvalue {min_eigenvalue:e})")]
    IntegratorStepTooLarge { min_eigenvalue: f64 },

    #[error("ridge solve failed: normal matrix not positive definite (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("hyperparameter outside the search space: {0}")]
    OutOfSpace(String),

    #[error("metric not computable: {0}")]
    Metric(String),

    #[error("io error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), source }
    }
}
