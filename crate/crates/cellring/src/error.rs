//! Crate-wide error type and result alias.

use thiserror::Error;

/// Errors produced by model construction, simulation, and analysis.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A model or run parameter violates its documented bound.
    #[error("invalid parameter `{name}` = {value}: must satisfy {bound}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        bound: &'static str,
    },

    /// A single map application produced a component outside the open unit interval.
    #[error("state component {component} = {value} left the open interval (0, 1)")]
    RangeEscape { component: usize, value: f64 },

    /// Range escape during iteration, with the step at which it occurred.
    #[error("range escape at step {step}: component {component} = {value} left (0, 1)")]
    RangeEscapeAt {
        step: usize,
        component: usize,
        value: f64,
    },

    /// Fixed-point search exhausted its iteration budget.
    #[error("fixed-point search did not converge after {max_iter} iterations (residual {residual:e})")]
    NotConverged { max_iter: usize, residual: f64 },

    /// The Newton step could not be computed.
    #[error("singular Jacobian encountered in the Newton step")]
    SingularJacobian,

    /// A fixed-point iterate left the open unit cube.
    #[error("fixed-point iterate left the open unit cube at component {component}")]
    BoundaryEscape { component: usize },

    /// A Jacobian entry is undefined because the equilibrium sits on the domain boundary.
    #[error("Jacobian entry singular: equilibrium component {component} = {value} is on the domain boundary")]
    SingularEntry { component: usize, value: f64 },

    /// An eigenvalue or linear-algebra routine failed to converge.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A time series is empty where at least one sample is required.
    #[error("series is empty")]
    EmptySeries,

    /// A time series is shorter than the operation requires.
    #[error("series has {len} samples but at least {min} are required")]
    SeriesTooShort { len: usize, min: usize },

    /// A series sample is NaN or infinite.
    #[error("series sample {index} = {value} is not finite")]
    NonFiniteSample { index: usize, value: f64 },

    /// A series has zero range (max == min) where an affine rescale is required.
    #[error("series has zero range (max == min), cannot normalize")]
    DegenerateRange,

    /// An axis specification is unusable.
    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    /// Configuration parsing or validation failed.
    #[error("config error: {0}")]
    Config(String),

    /// I/O failure, with the path involved.
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Process exit code class for the CLI: 2 config, 3 numerical, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. } | Error::InvalidAxis(_) | Error::Config(_) => 2,
            Error::Io { .. } => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
