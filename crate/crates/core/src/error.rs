use thiserror::Error;

/// Failure modes shared by every evaluation route.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Points are too close together for a route that divides by a Vandermonde.
    #[error("points too close for stable division (min separation {separation:e}, threshold {threshold:e})")]
    NearConfluent { separation: f64, threshold: f64 },
    /// A closed-form denominator vanishes (or nearly so) at the given shifts.
    #[error("pole hit: {0}")]
    PoleHit(String),
    /// A tensor grid or contour integral of this dimension is refused.
    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    /// The contour radius rule cannot keep the integrand's other singularities outside.
    #[error("contour radius {radius} cannot separate the enclosed points from other singularities")]
    ContourTooTight { radius: f64 },
    /// Polynomial coefficients do not arise from the stated factorization.
    #[error("inconsistent coefficients (residual {residual:e})")]
    Inconsistent { residual: f64 },
    /// The requested route has no extended-precision implementation.
    #[error("route `{0}` is only available in machine-double precision")]
    PrecisionUnsupported(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NearConfluent { .. } => "NearConfluent",
            Error::PoleHit(_) => "PoleHit",
            Error::DimensionCap { .. } => "DimensionCap",
            Error::ContourTooTight { .. } => "ContourTooTight",
            Error::Inconsistent { .. } => "Inconsistent",
            Error::PrecisionUnsupported(_) => "PrecisionUnsupported",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
