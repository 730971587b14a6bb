use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameter outside the range a construction is valid for.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Spatial dimension of a point does not match the domain.
    #[error("dimension mismatch: point has dimension {point}, domain expects {domain}")]
    DimensionMismatch { point: usize, domain: usize },

    /// |u'|^(p-2) is unbounded: p < 2 with vanishing gradient and nonzero
    /// second derivative.
    #[error("degenerate radial p-Laplacian: p = {p} < 2 with u' = 0")]
    DegenerateGradient { p: f64 },

    /// Finite-difference step does not fit inside the evaluation domain.
    #[error("finite-difference step {h} too large for margin at r = {r}")]
    StepTooLarge { h: f64, r: f64 },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureNonconvergence(String),

    /// Root finding (shooting constant, parameter search) failed.
    #[error("search failed: {0}")]
    SearchFailed(String),

    /// A pasting interface check failed: the inner function dips below the
    /// cap on the interface sphere, so min-pasting would not be lower
    /// semicontinuous.
    #[error("pasting interface check failed: min margin {margin} at r = {radius}")]
    InterfaceCheckFailed { margin: f64, radius: f64 },

    /// Explicit time stepping ground to a halt.
    #[error("time step underflow: dt = {dt} at t = {t}")]
    DtUnderflow { dt: f64, t: f64 },

    /// Boundary data evaluation produced a non-finite value.
    #[error("boundary data evaluation failed at (r, t) = ({r}, {t})")]
    BoundaryEvaluation { r: f64, t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
