//! Pinned numerical tolerances.
//!
//! Every threshold the verification layer asserts against lives here with a
//! one-line origin, so no test carries an ad-hoc magic number.

/// Spectral round trips and single Fourier-multiplier applications: a few
/// ulps of FFT rounding at desk-scale n.
pub const ROUND_TRIP_REL: f64 = 1e-12;

/// Relative mass drift allowed over a full trajectory. The semi-discrete
/// divergence form conserves the mean mode exactly; RK4 rounding accumulates
/// far below this.
pub const MASS_DRIFT_REL: f64 = 1e-8;

/// Maximum-principle slack per recorded pair: max u non-increasing and min u
/// non-decreasing up to time-integration rounding.
pub const MAX_PRINCIPLE_SLACK: f64 = 1e-9;

/// Monotonicity slack per recorded pair for the dissipated functionals
/// (entropy, L² distance, Lyapunov, θ sup-norm, Wiener A¹ norm).
pub const MONOTONE_SLACK: f64 = 1e-8;

/// Entropy/energy balance residual budget at record_every = 1e-3; dominated
/// by the trapezoid-in-time quadrature over records, O(record_every²).
pub const BALANCE_RESIDUAL: f64 = 1e-6;

/// Margin floor for the two nonlinear Sobolev inequality checks on random
/// unit-mass trials: the continuum margins are nonnegative, quadrature noise
/// sits orders of magnitude below this.
pub const INEQUALITY_MARGIN: f64 = -1e-10;

/// Slack for the discrete Wiener differential inequality
/// ⟨u0⟩·Δ‖w‖_{A¹}/Δt + (1−c)·‖w‖_{A³} ≤ 0, absorbing the centered-difference
/// truncation of the time derivative.
pub const WIENER_DIFFERENTIAL_SLACK: f64 = 1e-4;

/// |θ| must stay this far below π/2 for tan θ to be evaluated.
pub const SLOPE_MARGIN: f64 = 1e-6;

/// Default runtime positivity floor: the theory assumes u > 0; the solver
/// refuses to continue once u is indistinguishable from the degenerate
/// regime.
pub const POSITIVITY_FLOOR: f64 = 1e-8;
