use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} out of range for dimension {dim}")]
    OutOfRange { index: usize, dim: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The Hamiltonian handed to the integrator was not Hermitian.
    #[error("non-Hermitian Hamiltonian at t = {t}: max |H - H^dagger| = {defect:e}")]
    NonHermitian { t: f64, defect: f64 },

    /// Adaptive step size collapsed below the representable resolution.
    #[error("step size underflow at t = {t} (h = {step:e})")]
    StepUnderflow { t: f64, step: f64 },

    /// The disentangling functions approached a pole.
    #[error("Riccati singularity approached at t = {t}: {reason}")]
    Singularity { t: f64, reason: String },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
