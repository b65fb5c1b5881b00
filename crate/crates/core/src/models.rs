//! Right-hand-side evaluators for every PDE variant in scope.
//!
//! All of them are conservative flows on positive densities:
//!
//! - arctan-fast diffusion, in the expanded quotient form
//!   ∂t u = (u·∂x²u − (∂x u)²)/(u² + (∂x u)²),
//! - logarithmic fast diffusion ∂t u = ∂x(∂x u/u), the small-slope limit,
//! - the nonlocal variant ∂t u = ∂x arctan(−Hu/u) with H the periodic
//!   Hilbert transform,
//! - the (ε, κ)-regularized scheme
//!   ∂t u = ∂x 𝒥κ∗arctan(∂x(𝒥κ∗u)/(𝒥κ∗u + ε)) + ε·𝒥κ∗∂x²(𝒥κ∗u),
//!   which reduces to ∂x arctan(∂x u/u) at ε = κ = 0,
//!
//! plus the θ-formulation: θ = arctan(∂x u/u) evolves by
//! u(1+tan²θ)·∂tθ = ∂x²θ − tanθ·∂xθ (obtained by differentiating
//! tanθ = ∂x u/u in time and using ∂t u = ∂xθ).
//!
//! Every derivative inside a right-hand side is spectral; the
//! finite-difference operator exists only as a test oracle. tanθ is always
//! computed as ∂x u/u rather than tan of a stored θ, which stays accurate
//! as |θ| approaches π/2.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::tolerances;

/// Which right-hand side to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    ArctanLocal,
    LogDiffusion,
    ArctanNonlocal,
    Regularized,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::ArctanLocal => "arctan",
            ModelKind::LogDiffusion => "log",
            ModelKind::ArctanNonlocal => "nonlocal",
            ModelKind::Regularized => "regularized",
        }
    }
}

/// Parameters shared by the right-hand sides. ε and κ belong to the
/// regularized scheme and must be zero for every other kind; the positivity
/// floor is a runtime guard, not part of any equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Artificial viscosity of the regularized scheme.
    pub epsilon: f64,
    /// Heat-mollification time of the regularized scheme.
    pub kappa: f64,
    /// Sign convention of the Hilbert multiplier, ±1.
    pub hilbert_sign: f64,
    /// The solver refuses to evaluate once min u falls to this level.
    pub positivity_floor: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            kappa: 0.0,
            hilbert_sign: 1.0,
            positivity_floor: tolerances::POSITIVITY_FLOOR,
        }
    }
}

/// A validated (kind, params) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    pub kind: ModelKind,
    pub params: ModelParams,
}

impl Model {
    pub fn new(kind: ModelKind, params: ModelParams) -> Result<Self> {
        if !(params.epsilon >= 0.0 && params.epsilon.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "epsilon",
                reason: format!("must be finite and >= 0, got {}", params.epsilon),
            });
        }
        if !(params.kappa >= 0.0 && params.kappa.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "kappa",
                reason: format!("must be finite and >= 0, got {}", params.kappa),
            });
        }
        if params.hilbert_sign != 1.0 && params.hilbert_sign != -1.0 {
            return Err(Error::InvalidParameter {
                field: "hilbert_sign",
                reason: format!("must be +1 or -1, got {}", params.hilbert_sign),
            });
        }
        if !(params.positivity_floor > 0.0 && params.positivity_floor.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "positivity_floor",
                reason: format!("must be > 0, got {}", params.positivity_floor),
            });
        }
        if kind != ModelKind::Regularized && (params.epsilon != 0.0 || params.kappa != 0.0) {
            return Err(Error::InvalidParameter {
                field: "epsilon/kappa",
                reason: format!(
                    "only the regularized model takes epsilon/kappa, got ({}, {}) for {}",
                    params.epsilon,
                    params.kappa,
                    kind.name()
                ),
            });
        }
        Ok(Self { kind, params })
    }

    pub fn arctan_local() -> Self {
        Self {
            kind: ModelKind::ArctanLocal,
            params: ModelParams::default(),
        }
    }

    pub fn log_diffusion() -> Self {
        Self {
            kind: ModelKind::LogDiffusion,
            params: ModelParams::default(),
        }
    }

    pub fn nonlocal(hilbert_sign: f64) -> Result<Self> {
        Self::new(
            ModelKind::ArctanNonlocal,
            ModelParams {
                hilbert_sign,
                ..ModelParams::default()
            },
        )
    }

    pub fn regularized(epsilon: f64, kappa: f64) -> Result<Self> {
        Self::new(
            ModelKind::Regularized,
            ModelParams {
                epsilon,
                kappa,
                ..ModelParams::default()
            },
        )
    }

    /// Evaluate ∂t u for this model.
    pub fn rhs(&self, u: &GridFunction) -> Result<GridFunction> {
        match self.kind {
            ModelKind::ArctanLocal => rhs_arctan(u, &self.params),
            ModelKind::LogDiffusion => rhs_log(u, &self.params),
            ModelKind::ArctanNonlocal => rhs_nonlocal(u, &self.params),
            ModelKind::Regularized => rhs_regularized(u, &self.params),
        }
    }

    /// Effective diffusivity a(x) whose maximum sets the parabolic CFL step:
    /// u/(u²+u_x²) for the local/regularized arctan flows, 1/u for the
    /// logarithmic one, u/(u²+(Hu)²) for the nonlocal one.
    pub fn diffusivity(&self, u: &GridFunction) -> Result<GridFunction> {
        require_positive(u, self.params.positivity_floor)?;
        match self.kind {
            ModelKind::ArctanLocal | ModelKind::Regularized => {
                let ux = u.derivative(1);
                u.zip_map(&ux, |ui, uxi| ui / (ui * ui + uxi * uxi))
            }
            ModelKind::LogDiffusion => u.map(|ui| 1.0 / ui),
            ModelKind::ArctanNonlocal => {
                let hu = u
                    .to_spectrum()
                    .hilbert_transformed(self.params.hilbert_sign)
                    .to_grid_function();
                u.zip_map(&hu, |ui, hi| ui / (ui * ui + hi * hi))
            }
        }
    }
}

pub(crate) fn require_positive(u: &GridFunction, floor: f64) -> Result<()> {
    let min = u.min_value();
    if min <= floor {
        Err(Error::PositivityViolation { min, floor })
    } else {
        Ok(())
    }
}

/// ∂t u = (u·∂x²u − (∂x u)²)/(u² + (∂x u)²), the expanded form of
/// ∂x arctan(∂x u/u). The denominator is bounded below by (min u)² > 0.
pub fn rhs_arctan(u: &GridFunction, params: &ModelParams) -> Result<GridFunction> {
    require_positive(u, params.positivity_floor)?;
    let spectrum = u.to_spectrum();
    let ux = spectrum.differentiated(1).to_grid_function();
    let uxx = spectrum.differentiated(2).to_grid_function();
    let values = u
        .values()
        .iter()
        .zip(ux.values())
        .zip(uxx.values())
        .map(|((&ui, &uxi), &uxxi)| (ui * uxxi - uxi * uxi) / (ui * ui + uxi * uxi))
        .collect();
    GridFunction::new(u.grid(), values)
}

/// ∂t u = ∂x(∂x u/u) = (u·∂x²u − (∂x u)²)/u².
pub fn rhs_log(u: &GridFunction, params: &ModelParams) -> Result<GridFunction> {
    require_positive(u, params.positivity_floor)?;
    let spectrum = u.to_spectrum();
    let ux = spectrum.differentiated(1).to_grid_function();
    let uxx = spectrum.differentiated(2).to_grid_function();
    let values = u
        .values()
        .iter()
        .zip(ux.values())
        .zip(uxx.values())
        .map(|((&ui, &uxi), &uxxi)| (ui * uxxi - uxi * uxi) / (ui * ui))
        .collect();
    GridFunction::new(u.grid(), values)
}

/// ∂t u = ∂x arctan(sign·(−Hu)/u).
pub fn rhs_nonlocal(u: &GridFunction, params: &ModelParams) -> Result<GridFunction> {
    require_positive(u, params.positivity_floor)?;
    let hu = u
        .to_spectrum()
        .hilbert_transformed(params.hilbert_sign)
        .to_grid_function();
    let v = u.zip_map(&hu, |ui, hi| (-hi / ui).atan())?;
    Ok(v.derivative(1))
}

/// The regularized scheme, composed in the stated order: mollify, lift by ε,
/// arctan of the slope quotient, derivative, outer mollify, plus the
/// ε-viscosity term ε·𝒥κ∗∂x²(𝒥κ∗u). At ε = κ = 0 this is exactly
/// ∂x arctan(∂x u/u).
pub fn rhs_regularized(u: &GridFunction, params: &ModelParams) -> Result<GridFunction> {
    let mollified = u.heat_mollify(params.kappa);
    let lifted_min = mollified.min_value() + params.epsilon;
    if lifted_min <= params.positivity_floor {
        return Err(Error::PositivityViolation {
            min: lifted_min,
            floor: params.positivity_floor,
        });
    }
    let slope_arg = {
        let mx = mollified.derivative(1);
        mollified.zip_map(&mx, |mi, mxi| (mxi / (mi + params.epsilon)).atan())?
    };
    let transport = slope_arg.heat_mollify(params.kappa).derivative(1);
    let viscosity = mollified.derivative(2).heat_mollify(params.kappa);
    transport.zip_map(&viscosity, |t, v| t + params.epsilon * v)
}

/// θ = arctan(∂x u/u); the principal branch is the correct one since u > 0,
/// so the range is automatically inside (−π/2, π/2).
pub fn theta_from_u(u: &GridFunction) -> Result<GridFunction> {
    require_positive(u, 0.0)?;
    let ux = u.derivative(1);
    u.zip_map(&ux, |ui, uxi| (uxi / ui).atan())
}

/// ∂tθ from u(1+tan²θ)·∂tθ = ∂x²θ − tanθ·∂xθ, with tanθ evaluated as
/// ∂x u/u and u(1+tan²θ) = (u² + (∂x u)²)/u.
pub fn rhs_theta(theta: &GridFunction, u: &GridFunction) -> Result<GridFunction> {
    require_positive(u, 0.0)?;
    let theta_linf = theta.norm_linf();
    if theta_linf >= FRAC_PI_2 - tolerances::SLOPE_MARGIN {
        return Err(Error::SlopeBlowup { theta_linf });
    }
    let ux = u.derivative(1);
    let spectrum = theta.to_spectrum();
    let tx = spectrum.differentiated(1).to_grid_function();
    let txx = spectrum.differentiated(2).to_grid_function();
    let values = u
        .values()
        .iter()
        .zip(ux.values())
        .zip(tx.values().iter().zip(txx.values()))
        .map(|((&ui, &uxi), (&txi, &txxi))| {
            let tan_theta = uxi / ui;
            ui * (txxi - tan_theta * txi) / (ui * ui + uxi * uxi)
        })
        .collect();
    GridFunction::new(u.grid(), values)
}
