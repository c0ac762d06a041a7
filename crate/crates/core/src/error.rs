use thiserror::Error;

/// Errors raised while building geometries or evaluating rates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),

    #[error("degenerate denominator in {context} at k_par = {k_par}")]
    Degenerate { context: &'static str, k_par: String },

    #[error("dipole at {distance:e} from a layer boundary; the spectral tail does not decay")]
    TooCloseToBoundary { distance: f64 },

    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {error_estimate:e})")]
    NoConvergence { subdivisions: usize, error_estimate: f64 },

    #[error("stacks differ in geometry: {0}")]
    GeometryMismatch(String),

    #[error("no interior maximum of the decay rate in [{lo}, {hi}]")]
    NoResonance { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
