use thiserror::Error;

/// Errors raised by the summability, spectral and heat-kernel routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument {requested} lies beyond the enumeration horizon {horizon}")]
    Range { requested: f64, horizon: f64 },

    #[error("no stabilization within tolerance {tolerance:e}; last estimates {estimates:?}")]
    NonConvergence { tolerance: f64, estimates: Vec<f64> },

    #[error("truncation radius {radius} too small: boundary shell contributes {boundary:e}")]
    Truncation { radius: f64, boundary: f64 },

    #[error("quadrature did not reach tolerance {requested:e} (achieved {achieved:e})")]
    Quadrature { requested: f64, achieved: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("symbol is not elliptic: leading coefficient {0} must be positive")]
    Ellipticity(f64),

    #[error("series truncated at order {available}, need order {required}")]
    Order { required: i64, available: i64 },

    #[error(
        "vanishing denominator (n - 2m = 0 for m = {m}); coefficient is a moment, not a residue"
    )]
    Pole { m: u32 },

    #[error("missing capability: {0}")]
    Capability(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
