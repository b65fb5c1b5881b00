//! Method-of-lines time integration: classical RK4 with a parabolic
//! stability-scaled step, positivity guarding at every internal stage, and
//! trajectory recording decoupled from the step size.
//!
//! The step bound is dt = cfl·Δx²/(2·max a) with a the model's effective
//! diffusivity; for RK4 the true stability edge sits near 2.78·Δx²/(π²·max a),
//! so cfl ≤ 1 keeps a better-than-2× safety margin. Explicit stepping is
//! adequate at desk scale because a = u/(u²+u_x²) ≤ 1/(2·min u).

use std::fmt;

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::models::{require_positive, Model};
use crate::tolerances;

/// Knobs for [`integrate`]. Invalid combinations are rejected by
/// [`SolverConfig::validate`] before any stepping happens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Fraction of the stability bound to use, in (0, 1].
    pub cfl: f64,
    /// Final time.
    pub t_end: f64,
    /// Diagnostics sampling interval; records land on its multiples.
    pub record_every: f64,
    /// Hard cap on step count.
    pub max_steps: u64,
    /// The run aborts once min u falls to this level.
    pub positivity_floor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.25,
            t_end: 1.0,
            record_every: 0.01,
            max_steps: 10_000_000,
            positivity_floor: tolerances::POSITIVITY_FLOOR,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter {
                field: "cfl",
                reason: format!("must be in (0, 1], got {}", self.cfl),
            });
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "t_end",
                reason: format!("must be finite and > 0, got {}", self.t_end),
            });
        }
        if !(self.record_every > 0.0 && self.record_every.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "record_every",
                reason: format!("must be finite and > 0, got {}", self.record_every),
            });
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter {
                field: "max_steps",
                reason: "must be >= 1".into(),
            });
        }
        if !(self.positivity_floor > 0.0 && self.positivity_floor.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "positivity_floor",
                reason: format!("must be > 0, got {}", self.positivity_floor),
            });
        }
        Ok(())
    }
}

/// Instantaneous solver state.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub t: f64,
    pub u: GridFunction,
    pub step_count: u64,
    pub last_dt: f64,
}

impl SolverState {
    pub fn initial(u: GridFunction) -> Self {
        Self {
            t: 0.0,
            u,
            step_count: 0,
            last_dt: 0.0,
        }
    }
}

/// Why a trajectory stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ReachedTEnd,
    PositivityViolation,
    SlopeBlowup,
    StepLimit,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::ReachedTEnd => "reached_t_end",
            Termination::PositivityViolation => "positivity_violation",
            Termination::SlopeBlowup => "slope_blowup",
            Termination::StepLimit => "step_limit",
        })
    }
}

/// One recorded time slice.
#[derive(Debug, Clone)]
pub struct Sample {
    pub t: f64,
    pub u: GridFunction,
    pub diagnostics: DiagnosticsRecord,
}

/// Ordered snapshots (strictly increasing times, first at t = 0 unless the
/// initial data already violates positivity) plus the stop reason.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }
}

fn breakdown(e: &Error) -> Termination {
    match e {
        Error::SlopeBlowup { .. } => Termination::SlopeBlowup,
        // Everything else mid-run is a symptom of leaving the positive
        // regime the theory covers.
        _ => Termination::PositivityViolation,
    }
}

/// Stability-scaled step for the current state:
/// dt = cfl·Δx²/(2·max_x a(x)).
pub fn stable_dt(u: &GridFunction, model: &Model, cfl: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::InvalidParameter {
            field: "cfl",
            reason: format!("must be in (0, 1], got {cfl}"),
        });
    }
    let a_max = model.diffusivity(u)?.max_value();
    let dx = u.grid().spacing();
    Ok(cfl * dx * dx / (2.0 * a_max))
}

fn axpy(base: &GridFunction, scale: f64, dir: &GridFunction) -> Result<GridFunction> {
    base.zip_map(dir, |b, d| b + scale * d)
}

/// One classical 4-stage Runge–Kutta step. Positivity is enforced on every
/// internal stage (each stage feeds a guarded rhs evaluation) and on the
/// combined result.
pub fn step_rk4(state: &SolverState, model: &Model, dt: f64) -> Result<SolverState> {
    assert!(dt > 0.0, "step size must be positive, got {dt}");
    let u = &state.u;
    let k1 = model.rhs(u)?;
    let k2 = model.rhs(&axpy(u, 0.5 * dt, &k1)?)?;
    let k3 = model.rhs(&axpy(u, 0.5 * dt, &k2)?)?;
    let k4 = model.rhs(&axpy(u, dt, &k3)?)?;
    let sixth = dt / 6.0;
    let values: Vec<f64> = (0..u.grid().n())
        .map(|j| {
            u.values()[j]
                + sixth
                    * (k1.values()[j]
                        + 2.0 * (k2.values()[j] + k3.values()[j])
                        + k4.values()[j])
        })
        .collect();
    let next = GridFunction::new(u.grid(), values)?;
    require_positive(&next, model.params.positivity_floor)?;
    Ok(SolverState {
        t: state.t + dt,
        u: next,
        step_count: state.step_count + 1,
        last_dt: dt,
    })
}

/// Integrate `u0` to `config.t_end`, recording a diagnostics sample at t = 0,
/// at every multiple of `record_every`, and at the final time. The step is
/// min(stability bound, distance to the next boundary); breakdowns are
/// encoded in the returned termination, never raised.
///
/// The hook receives (t, u, dt_used) at each record point; see
/// [`run_with_diagnostics`] for the standard hook.
pub fn integrate<F>(
    u0: &GridFunction,
    model: &Model,
    config: &SolverConfig,
    mut diagnostics: F,
) -> Result<Trajectory>
where
    F: FnMut(f64, &GridFunction, f64) -> DiagnosticsRecord,
{
    config.validate()?;
    if u0.min_value() <= config.positivity_floor {
        return Ok(Trajectory {
            samples: vec![],
            termination: Termination::PositivityViolation,
        });
    }

    // boundary snap width: far below any stable step, far above f64 rounding
    // of the t accumulator
    let snap_eps = (1e-9 * config.record_every).max(1e-13 * config.t_end.max(1.0));
    let mut samples = vec![Sample {
        t: 0.0,
        u: u0.clone(),
        diagnostics: diagnostics(0.0, u0, 0.0),
    }];
    let mut state = SolverState::initial(u0.clone());
    let mut next_record = config.record_every;

    let termination = loop {
        if state.t >= config.t_end - snap_eps {
            break Termination::ReachedTEnd;
        }
        if state.step_count >= config.max_steps {
            break Termination::StepLimit;
        }
        let dt_stable = match stable_dt(&state.u, model, config.cfl) {
            Ok(v) => v,
            Err(e) => break breakdown(&e),
        };
        let target = next_record.min(config.t_end);
        let dt = dt_stable.min(target - state.t);
        state = match step_rk4(&state, model, dt) {
            Ok(s) => s,
            Err(e) => break breakdown(&e),
        };
        if (state.t - target).abs() <= snap_eps {
            state.t = target;
            // record boundaries are multiples of record_every; t_end itself
            // is handled after the loop unless it coincides with one
            if (target - next_record).abs() <= snap_eps {
                samples.push(Sample {
                    t: state.t,
                    u: state.u.clone(),
                    diagnostics: diagnostics(state.t, &state.u, state.last_dt),
                });
                next_record += config.record_every;
            }
        }
    };

    if termination == Termination::ReachedTEnd {
        let last_t = samples.last().map(|s| s.t).unwrap_or(f64::NEG_INFINITY);
        if state.t - last_t > snap_eps {
            samples.push(Sample {
                t: state.t,
                u: state.u.clone(),
                diagnostics: diagnostics(state.t, &state.u, state.last_dt),
            });
        }
    }

    Ok(Trajectory {
        samples,
        termination,
    })
}

/// [`integrate`] with the standard diagnostics hook: every record carries the
/// full functional set, with ⟨u0⟩ taken from the initial data.
pub fn run_with_diagnostics(
    u0: &GridFunction,
    model: &Model,
    config: &SolverConfig,
) -> Result<Trajectory> {
    let mean_u0 = u0.mean();
    integrate(u0, model, config, |t, u, dt_used| {
        DiagnosticsRecord::compute(t, u, mean_u0, dt_used)
            .expect("diagnostics are total on the positivity-guarded trajectory")
    })
}
