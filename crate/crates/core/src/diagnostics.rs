//! The functionals, balance laws, inequalities, and decay bounds satisfied
//! by the flow, evaluated on snapshots and trajectories.
//!
//! For a positive density u with slope angle θ = arctan(∂x u/u):
//!
//! - entropy 𝓗 = ∫ u·log u − u + 1 dx, dissipated at rate
//!   𝓓 = ∫ arctan(∂x u/u)·(∂x u/u) dx,
//! - L² energy ½‖u−⟨u0⟩‖², dissipated at rate
//!   𝒟 = ∫ arctan(∂x u/u)·∂x u dx,
//! - Lyapunov functional L = ∫ u(1+tan²θ)(θ²/2 + θ⁴/4) dx,
//! - two nonlinear Sobolev inequalities bounding 𝒟 and 𝓓 from below for
//!   unit-mass densities,
//! - an exponential decay bound on ‖u−⟨u0⟩‖_{L²} with Poincaré constant
//!   (2π)^{−1/2},
//! - and, for small relative perturbations w = (u−⟨u0⟩)/⟨u0⟩ with
//!   ‖w‖_{A¹} < 1/10, the Wiener-algebra differential inequality
//!   ⟨u0⟩·d‖w‖_{A¹}/dt + (1−c)·‖w‖_{A³} ≤ 0 with c = 6a/(1−4a),
//!   a = sup_t ‖w‖_{A¹}.
//!
//! Everywhere tan θ and 1+tan²θ are evaluated through ∂x u/u, never through
//! tan of a stored angle.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::models::require_positive;
use crate::timestep::Trajectory;
use crate::tolerances;

/// Poincaré constant in C·‖u−⟨u⟩‖_{L²} ≤ ‖∂x u‖_{L¹} on the 2π-circle,
/// from chaining ‖u−⟨u⟩‖_{L∞} ≤ ‖∂x u‖_{L¹} with ‖f‖_{L²} ≤ √(2π)‖f‖_{L∞}.
pub const POINCARE_CONSTANT: f64 = 0.398_942_280_401_432_7e0; // (2π)^{−1/2}

/// Smallness threshold on ‖w0‖_{A¹} for the Wiener-regime check.
pub const WIENER_HYPOTHESIS_BOUND: f64 = 0.1;

/// One time slice of every tracked functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub min_u: f64,
    pub max_u: f64,
    /// ‖u − ⟨u0⟩‖_{L²}, with ⟨u0⟩ fixed from the initial data.
    pub l2_dist: f64,
    pub entropy: f64,
    pub entropy_dissipation: f64,
    pub energy_dissipation: f64,
    pub lyapunov: f64,
    pub theta_linf: f64,
    /// ‖w‖_{A¹} of the relative perturbation w = (u − ⟨u0⟩)/⟨u0⟩.
    pub a1_norm: f64,
    /// ‖w‖_{A³} of the relative perturbation.
    pub a3_norm: f64,
    pub dt_used: f64,
}

/// Pointwise functionals sharing one derivative evaluation.
struct Functionals {
    entropy: f64,
    entropy_dissipation: f64,
    energy_dissipation: f64,
    lyapunov: f64,
    theta_linf: f64,
}

fn functionals(u: &GridFunction) -> Result<Functionals> {
    require_positive(u, 0.0)?;
    let ux = u.derivative(1);
    let dx = u.grid().spacing();
    let mut entropy = 0.0;
    let mut entropy_dissipation = 0.0;
    let mut energy_dissipation = 0.0;
    let mut lyapunov = 0.0;
    let mut theta_linf = 0.0f64;
    for (&ui, &uxi) in u.values().iter().zip(ux.values()) {
        let slope = uxi / ui;
        let theta = slope.atan();
        entropy += ui * ui.ln() - ui + 1.0;
        entropy_dissipation += theta * slope;
        energy_dissipation += theta * uxi;
        let theta2 = theta * theta;
        lyapunov += ui * (1.0 + slope * slope) * (0.5 * theta2 + 0.25 * theta2 * theta2);
        theta_linf = theta_linf.max(theta.abs());
    }
    Ok(Functionals {
        entropy: dx * entropy,
        entropy_dissipation: dx * entropy_dissipation,
        energy_dissipation: dx * energy_dissipation,
        lyapunov: dx * lyapunov,
        theta_linf,
    })
}

/// 𝓗(u) = ∫ u·log u − u + 1 dx ≥ 0, zero exactly at u ≡ 1.
pub fn entropy(u: &GridFunction) -> Result<f64> {
    Ok(functionals(u)?.entropy)
}

/// 𝓓(u) = ∫ arctan(∂x u/u)·(∂x u/u) dx ≥ 0 (the integrand is z·arctan z).
pub fn entropy_dissipation(u: &GridFunction) -> Result<f64> {
    Ok(functionals(u)?.entropy_dissipation)
}

/// 𝒟(u) = ∫ arctan(∂x u/u)·∂x u dx ≥ 0.
pub fn energy_dissipation(u: &GridFunction) -> Result<f64> {
    Ok(functionals(u)?.energy_dissipation)
}

/// L(u) = ∫ u(1+tan²θ)(θ²/2 + θ⁴/4) dx with θ = arctan(∂x u/u);
/// non-increasing along the arctan flow.
pub fn lyapunov(u: &GridFunction) -> Result<f64> {
    Ok(functionals(u)?.lyapunov)
}

/// ‖arctan(∂x u/u)‖_{L∞}.
pub fn theta_sup_norm(u: &GridFunction) -> Result<f64> {
    Ok(functionals(u)?.theta_linf)
}

impl DiagnosticsRecord {
    /// Evaluate every functional on one snapshot. `mean_u0` is ⟨u0⟩ of the
    /// trajectory's initial data (equal to ⟨u⟩ while mass is conserved).
    pub fn compute(t: f64, u: &GridFunction, mean_u0: f64, dt_used: f64) -> Result<Self> {
        let f = functionals(u)?;
        let dx = u.grid().spacing();
        let l2_sq: f64 = u
            .values()
            .iter()
            .map(|&v| (v - mean_u0) * (v - mean_u0))
            .sum::<f64>()
            * dx;
        let spectrum = u.to_spectrum();
        // For α ≥ 1 the k = 0 mode drops out, so the A^α norms of
        // w = (u − ⟨u0⟩)/⟨u0⟩ are the norms of u itself scaled by 1/⟨u0⟩.
        let a1_norm = spectrum.wiener_norm(1.0) / mean_u0;
        let a3_norm = spectrum.wiener_norm(3.0) / mean_u0;
        Ok(Self {
            t,
            mass: u.quadrature(),
            min_u: u.min_value(),
            max_u: u.max_value(),
            l2_dist: l2_sq.sqrt(),
            entropy: f.entropy,
            entropy_dissipation: f.entropy_dissipation,
            energy_dissipation: f.energy_dissipation,
            lyapunov: f.lyapunov,
            theta_linf: f.theta_linf,
            a1_norm,
            a3_norm,
            dt_used,
        })
    }
}

/// Outcome of one inequality evaluation. The margin is recorded even when
/// negative; asserting its sign is the caller's job.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// true when the input was rescaled to unit mass before evaluation.
    pub normalized_input: bool,
}

fn normalize_to_unit_mass(u: &GridFunction) -> Result<(GridFunction, bool)> {
    require_positive(u, 0.0)?;
    let mass = u.quadrature();
    let normalized = (mass - 1.0).abs() > 1e-12;
    Ok((u.map(|v| v / mass)?, normalized))
}

/// First nonlinear Sobolev inequality for unit-mass positive densities:
/// ∫ arctan(|∂x u|/u)·|∂x u| dx ≥ arctan(‖u‖_{Ẇ^{1,1}})·‖u‖_{Ẇ^{1,1}}.
///
/// The |·| form and the signed form ∫arctan(∂x u/u)∂x u coincide pointwise
/// because arctan is odd; the |·| form is evaluated here.
pub fn check_inequality_1(u: &GridFunction) -> Result<InequalityReport> {
    let (v, normalized_input) = normalize_to_unit_mass(u)?;
    let vx = v.derivative(1);
    let dx = v.grid().spacing();
    let lhs = dx * v
        .values()
        .iter()
        .zip(vx.values())
        .map(|(&vi, &vxi)| (vxi.abs() / vi).atan() * vxi.abs())
        .sum::<f64>();
    let seminorm = vx.norm_l1();
    let rhs = seminorm.atan() * seminorm;
    Ok(InequalityReport {
        lhs,
        rhs,
        margin: lhs - rhs,
        normalized_input,
    })
}

/// Second nonlinear Sobolev inequality for unit-mass positive densities:
/// ∫ arctan(|∂x u|/u)·(|∂x u|/u) dx ≥ (1/4π)·arctan(X)·X with
/// X = ‖u‖²_{Ẇ^{1,1}}/‖|∂x u|·u‖_{L¹}. Constant input is degenerate (the
/// quotient is 0/0; both sides vanish in the limit) and reported as such.
pub fn check_inequality_2(u: &GridFunction) -> Result<InequalityReport> {
    let (v, normalized_input) = normalize_to_unit_mass(u)?;
    let vx = v.derivative(1);
    let dx = v.grid().spacing();
    let weighted: f64 = dx * v
        .values()
        .iter()
        .zip(vx.values())
        .map(|(&vi, &vxi)| vxi.abs() * vi)
        .sum::<f64>();
    if weighted < 1e-14 {
        return Err(Error::DegenerateInput);
    }
    let lhs = dx * v
        .values()
        .iter()
        .zip(vx.values())
        .map(|(&vi, &vxi)| {
            let q = vxi.abs() / vi;
            q.atan() * q
        })
        .sum::<f64>();
    let seminorm = vx.norm_l1();
    let x = seminorm * seminorm / weighted;
    let rhs = x.atan() * x / (4.0 * PI);
    Ok(InequalityReport {
        lhs,
        rhs,
        margin: lhs - rhs,
        normalized_input,
    })
}

/// Exponential decay envelope for ‖u(t)−⟨u0⟩‖_{L²}:
/// E0·exp(−½·(arctan(C·E0)/E0)·t) with E0 the initial distance and
/// C = [`POINCARE_CONSTANT`]. Returns 0 for constant initial data.
pub fn decay_bound(u0: &GridFunction, t: f64) -> f64 {
    let mean = u0.mean();
    let dx = u0.grid().spacing();
    let e0 = (dx * u0
        .values()
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .sum::<f64>())
    .sqrt();
    if e0 == 0.0 {
        return 0.0;
    }
    let rate = 0.5 * (POINCARE_CONSTANT * e0).atan() / e0;
    e0 * (-rate * t).exp()
}

/// Worst defect of the entropy balance 𝓗(t)+∫₀ᵗ𝓓 = 𝓗(0) and the energy
/// balance ½‖u−⟨u0⟩‖² + ∫₀ᵗ𝒟 = ½‖u0−⟨u0⟩‖² over the records, with the time
/// integrals taken by the trapezoid rule over record times. Recomputes every
/// functional from the stored snapshots.
pub fn balance_residuals(traj: &Trajectory) -> Result<(f64, f64)> {
    if traj.samples.len() < 3 {
        return Err(Error::InsufficientRecords {
            got: traj.samples.len(),
        });
    }
    let mean0 = traj.samples[0].u.mean();
    let evaluated: Vec<(f64, f64, f64, f64)> = traj
        .samples
        .iter()
        .map(|s| {
            let rec = DiagnosticsRecord::compute(s.t, &s.u, mean0, 0.0)?;
            Ok((
                s.t,
                rec.entropy,
                rec.entropy_dissipation,
                0.5 * rec.l2_dist * rec.l2_dist,
            ))
        })
        .collect::<Result<_>>()?;
    let energy_rates: Vec<f64> = traj
        .samples
        .iter()
        .map(|s| energy_dissipation(&s.u))
        .collect::<Result<_>>()?;

    let h0 = evaluated[0].1;
    let e0 = evaluated[0].3;
    let mut cum_entropy = 0.0;
    let mut cum_energy = 0.0;
    let mut worst_entropy = 0.0f64;
    let mut worst_energy = 0.0f64;
    for i in 1..evaluated.len() {
        let dt = evaluated[i].0 - evaluated[i - 1].0;
        cum_entropy += 0.5 * dt * (evaluated[i].2 + evaluated[i - 1].2);
        cum_energy += 0.5 * dt * (energy_rates[i] + energy_rates[i - 1]);
        worst_entropy = worst_entropy.max((evaluated[i].1 + cum_entropy - h0).abs());
        worst_energy = worst_energy.max((evaluated[i].3 + cum_energy - e0).abs());
    }
    Ok((worst_entropy, worst_energy))
}

/// Checks run when the Wiener smallness hypothesis holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerChecks {
    pub a1_sup: f64,
    /// c = 6a/(1−4a) for a = sup_t ‖w‖_{A¹}; below 1 under the hypothesis.
    pub contraction: f64,
    pub a1_monotone: bool,
    /// max over interior records of ⟨u0⟩·Δ‖w‖_{A¹}/Δt + (1−c)·‖w‖_{A³}
    /// (centered differences).
    pub max_differential_slack: f64,
    pub satisfied: bool,
}

/// Result of [`wiener_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerReport {
    pub a1_initial: f64,
    /// ‖w0‖_{A¹} < 1/10. When false, the checks are not run: the theory does
    /// not apply and c = 6a/(1−4a) is meaningless.
    pub hypothesis_satisfied: bool,
    pub checks: Option<WienerChecks>,
}

impl WienerReport {
    pub fn passes(&self) -> bool {
        self.hypothesis_satisfied && self.checks.map(|c| c.satisfied).unwrap_or(false)
    }
}

/// Verify the Wiener-regime behaviour of a trajectory: ‖w(t)‖_{A¹}
/// non-increasing and the discrete differential inequality
/// ⟨u0⟩·d‖w‖_{A¹}/dt + (1−c)·‖w‖_{A³} ≤ slack. A failed smallness
/// hypothesis is reported, not raised.
pub fn wiener_check(traj: &Trajectory, mean_u0: f64) -> Result<WienerReport> {
    if traj.samples.len() < 3 {
        return Err(Error::InsufficientRecords {
            got: traj.samples.len(),
        });
    }
    let series: Vec<(f64, f64, f64)> = traj
        .samples
        .iter()
        .map(|s| {
            let spectrum = s.u.to_spectrum();
            (
                s.t,
                spectrum.wiener_norm(1.0) / mean_u0,
                spectrum.wiener_norm(3.0) / mean_u0,
            )
        })
        .collect();

    let a1_initial = series[0].1;
    if a1_initial >= WIENER_HYPOTHESIS_BOUND {
        return Ok(WienerReport {
            a1_initial,
            hypothesis_satisfied: false,
            checks: None,
        });
    }

    let a1_sup = series.iter().map(|s| s.1).fold(0.0f64, f64::max);
    let contraction = 6.0 * a1_sup / (1.0 - 4.0 * a1_sup);
    let a1_monotone = series
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 + tolerances::MONOTONE_SLACK);
    let mut max_differential_slack = f64::NEG_INFINITY;
    for i in 1..series.len() - 1 {
        let (t_prev, a1_prev, _) = series[i - 1];
        let (_, _, a3_here) = series[i];
        let (t_next, a1_next, _) = series[i + 1];
        let rate = (a1_next - a1_prev) / (t_next - t_prev);
        max_differential_slack =
            max_differential_slack.max(mean_u0 * rate + (1.0 - contraction) * a3_here);
    }
    let satisfied = a1_monotone
        && contraction < 1.0
        && max_differential_slack <= tolerances::WIENER_DIFFERENTIAL_SLACK;
    Ok(WienerReport {
        a1_initial,
        hypothesis_satisfied: true,
        checks: Some(WienerChecks {
            a1_sup,
            contraction,
            a1_monotone,
            max_differential_slack,
            satisfied,
        }),
    })
}
