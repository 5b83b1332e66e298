use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no turning point: p_v^2 = {p_sq:.6e} exceeds the largest reachable level {level:.6e}")]
    NoTurningPoint { p_sq: f64, level: f64 },

    #[error("quadrature did not converge: estimate {estimate:.6e}, error bound {error:.3e}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("root finding failed: {0}")]
    Root(String),

    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error("no parameter in the scanned range changes the barrier count")]
    NotFound,

    #[error("degenerate parameter range [{lo}, {hi}]")]
    DegenerateRange { lo: f64, hi: f64 },

    #[error("degenerate critical point at r = {r:.9} (dG/dr = {slope:.3e})")]
    DegenerateCritical { r: f64, slope: f64 },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("stencil error: {0}")]
    Stencil(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(err: std::io::Error) -> Self {
        LabError::Io(err.to_string())
    }
}

impl From<serde_json::Error> for LabError {
    fn from(err: serde_json::Error) -> Self {
        LabError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
