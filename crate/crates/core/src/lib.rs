//! Solver and verifier for the arctan-fast diffusion equation
//! ∂t u = ∂x arctan(∂x u/u) on the circle.
//!
//! The crate integrates the equation (and its θ-formulation, logarithmic,
//! nonlocal, and regularized variants) with a pseudo-spectral method-of-lines
//! scheme, and evaluates every conservation law, monotone functional, decay
//! bound, and nonlinear Sobolev inequality the equation satisfies, so the
//! whole package can be checked numerically: by closed-form oracles, by
//! randomized trials, and by the acceptance suite in `tests/acceptance.rs`.
//!
//! Module map:
//! - [`grid`]: periodic grid, FFT-based transforms, derivatives, quadrature,
//!   norms (L¹/L²/L∞, Ẇ^{1,1}, Wiener A^α), heat mollifier, Hilbert transform.
//! - [`models`]: right-hand sides of each PDE variant plus the θ-formulation.
//! - [`timestep`]: RK4 method of lines with stability-scaled steps and
//!   positivity guarding.
//! - [`diagnostics`]: entropy/energy balances, Lyapunov functional, the two
//!   nonlinear Sobolev inequality checks, decay bound, Wiener-regime check.
//! - [`trialgen`]: deterministic random positive unit-mass densities and the
//!   named presets used by the CLI and the tests.

pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod models;
pub mod timestep;
pub mod tolerances;
pub mod trialgen;

pub use error::{Error, Result};
pub use grid::{from_spectrum, Grid, GridFunction, SpectrumField};
pub use models::{Model, ModelKind, ModelParams};
pub use timestep::{integrate, run_with_diagnostics, SolverConfig, SolverState, Termination, Trajectory};
pub use diagnostics::{DiagnosticsRecord, InequalityReport, WienerReport};
pub use trialgen::{Preset, TrialConfig};
