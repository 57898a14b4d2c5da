//! Simulation and analysis of biochemical substance exchange modeled as
//! coupled logistic maps on two-cell and N-cell ring topologies.
//!
//! The crate provides:
//! * [`dynamics`] — the coupled-map state evolution, trajectories, and
//!   fixed-point search;
//! * [`complexity`] — Lempel-Ziv (LZ76) complexity, the normalized complexity
//!   spectrum of a series, and its maximum;
//! * [`stability`] — Jacobians, eigenvalues, spectral radii, infinity-norm
//!   conditions, and the coupling-independent stability region S;
//! * [`sweep`] — deterministic parallel parameter-space grids;
//! * [`config`] / [`output`] — CLI configuration, CSV serialization, and
//!   plot-script emission behind the `cellring` binary.

pub mod complexity;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod output;
pub mod stability;
pub mod sweep;

pub use error::{Error, Result};
