use thiserror::Error;

/// Errors raised by the geometric primitives and the geodesic evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("tangent vector is not unit: |v|^2 = {norm_sq} (tolerance {tol})")]
    NonUnit { norm_sq: f64, tol: f64 },

    #[error("cone radius {0} is not above the minimum radius")]
    RadiusTooSmall(f64),

    #[error("metric parameter L = {0} must be positive")]
    InvalidMetricParam(f64),

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("arc-length parameter s = {s} lies outside the geodesic domain ({s_min}, {s_max})")]
    OutsideDomain { s: f64, s_min: f64, s_max: f64 },

    #[error(transparent)]
    Numeric(#[from] crate::numeric::NumericError),
}

pub type Result<T> = std::result::Result<T, GeomError>;
