use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ill-conditioned map: resultant {resultant:.3e} below threshold {threshold:.3e}")]
    IllConditioned { resultant: f64, threshold: f64 },

    #[error("quadrature did not converge: successive estimates differ by {difference:.3e} (tolerance {tolerance:.3e}); {hint}")]
    Accuracy { difference: f64, tolerance: f64, hint: String },

    #[error("profile is singular or not positive definite at lambda = {lambda}: {reason}")]
    SingularProfile { lambda: f64, reason: String },

    #[error("integral diverges: tail estimate {tail:.3e} exceeds tolerance {tolerance:.3e}")]
    Divergent { tail: f64, tolerance: f64 },

    #[error("no fixed points: the antipodal involution has no fixed maps in even degree {0}")]
    NoFixedPoints(usize),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("Euler chart {chart} degenerates at theta = {theta:.3e}; switch charts")]
    ChartBoundary { chart: usize, theta: f64 },

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for GeomError {
    fn from(e: std::io::Error) -> Self {
        GeomError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for GeomError {
    fn from(e: serde_json::Error) -> Self {
        GeomError::Parse(e.to_string())
    }
}

impl From<csv::Error> for GeomError {
    fn from(e: csv::Error) -> Self {
        GeomError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
