//! Deterministic generation of positive, band-limited, unit-mass densities
//! for inequality fuzzing and solver initial data, plus the named presets.
//!
//! Randomness comes from a counter-based splitmix64 stream: draw i of stream
//! `seed` is `mix(seed + (i+1)·0x9E3779B97F4A7C15)` with the standard
//! splitmix64 finalizer, so a (seed, index) pair gives the same f64 on every
//! platform and failure seeds replay exactly.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Value `index` of the counter-based stream `seed`.
pub fn stream_u64(seed: u64, index: u64) -> u64 {
    mix(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Uniform draw in [−1, 1) from the top 53 bits of [`stream_u64`].
pub fn stream_unit(seed: u64, index: u64) -> f64 {
    const TWO_53: f64 = 9_007_199_254_740_992.0;
    (stream_u64(seed, index) >> 11) as f64 * (2.0 / TWO_53) - 1.0
}

/// Recipe for one random density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConfig {
    pub seed: u64,
    /// Highest Fourier mode K; coefficients decay like k^{−amplitude_decay}.
    pub max_mode: usize,
    /// The pre-normalization profile 1 + g is rescaled so its minimum is at
    /// least this, in (0, 1).
    pub min_floor: f64,
    pub amplitude_decay: f64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            max_mode: 32,
            min_floor: 0.2,
            amplitude_decay: 1.5,
        }
    }
}

impl TrialConfig {
    fn validate(&self, grid: Grid) -> Result<()> {
        if !(self.min_floor > 0.0 && self.min_floor < 1.0) {
            return Err(Error::InvalidParameter {
                field: "min_floor",
                reason: format!("must be in (0, 1), got {}", self.min_floor),
            });
        }
        if !(self.amplitude_decay > 0.0 && self.amplitude_decay.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "amplitude_decay",
                reason: format!("must be > 0, got {}", self.amplitude_decay),
            });
        }
        if self.max_mode > grid.n() / 4 {
            return Err(Error::InvalidParameter {
                field: "max_mode",
                reason: format!(
                    "must be <= n/4 = {} for n = {}, got {}",
                    grid.n() / 4,
                    grid.n(),
                    self.max_mode
                ),
            });
        }
        Ok(())
    }
}

/// Draw a strictly positive unit-mass density: random band-limited profile
/// g = Σ a_k cos kx + b_k sin kx with a_k, b_k uniform in [−1,1]·k^{−decay},
/// rescaled so min(1+g) ≥ min_floor, then normalized to ∫u dx = 1.
/// max_mode = 0 degenerates to the constant density 1/2π.
pub fn random_positive_density(cfg: &TrialConfig, grid: Grid) -> Result<GridFunction> {
    cfg.validate(grid)?;
    if cfg.max_mode == 0 {
        return GridFunction::constant(grid, 1.0 / TAU);
    }
    let coeffs: Vec<(f64, f64)> = (1..=cfg.max_mode)
        .map(|k| {
            let scale = (k as f64).powf(-cfg.amplitude_decay);
            let a = stream_unit(cfg.seed, 2 * (k as u64 - 1)) * scale;
            let b = stream_unit(cfg.seed, 2 * (k as u64 - 1) + 1) * scale;
            (a, b)
        })
        .collect();
    let profile = GridFunction::from_fn(grid, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let k = (i + 1) as f64;
                a * (k * x).cos() + b * (k * x).sin()
            })
            .sum()
    })?;
    let min = profile.min_value();
    let shrink = if 1.0 + min < cfg.min_floor {
        (1.0 - cfg.min_floor) / -min
    } else {
        1.0
    };
    let lifted = profile.map(|v| 1.0 + shrink * v)?;
    let mass = lifted.quadrature();
    lifted.map(|v| v / mass)
}

/// Named initial-data profiles. None of them is mass-normalized; they carry
/// the scales the verification runs expect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// u ≡ 1.
    Constant,
    /// 1 + a·cos x with |a| < 1.
    CosineBump(f64),
    /// e^{a·sin x}, positive for every finite a.
    ExpSin(f64),
    /// 1 + a·cos x + b·sin 2x, parameters constrained so min u > 0.
    TwoMode(f64, f64),
    /// 1 + a·cos x with |a| < 1/10, inside the Wiener smallness hypothesis.
    WienerSmall(f64),
}

impl Preset {
    pub fn realize(&self, grid: Grid) -> Result<GridFunction> {
        match *self {
            Preset::Constant => GridFunction::constant(grid, 1.0),
            Preset::CosineBump(a) => {
                if !(a.is_finite() && a.abs() < 1.0) {
                    return Err(Error::InvalidPreset {
                        reason: format!("cosine_bump(a) needs |a| < 1, got {a}"),
                    });
                }
                GridFunction::from_fn(grid, |x| 1.0 + a * x.cos())
            }
            Preset::ExpSin(a) => {
                if !a.is_finite() {
                    return Err(Error::InvalidPreset {
                        reason: format!("exp_sin(a) needs finite a, got {a}"),
                    });
                }
                GridFunction::from_fn(grid, |x| (a * x.sin()).exp())
            }
            Preset::TwoMode(a, b) => {
                let f = GridFunction::from_fn(grid, |x| 1.0 + a * x.cos() + b * (2.0 * x).sin())?;
                if f.min_value() <= 0.0 {
                    return Err(Error::InvalidPreset {
                        reason: format!(
                            "two_mode({a}, {b}) is not positive (min = {})",
                            f.min_value()
                        ),
                    });
                }
                Ok(f)
            }
            Preset::WienerSmall(a) => {
                if !(a.is_finite() && a.abs() < 0.1) {
                    return Err(Error::InvalidPreset {
                        reason: format!("wiener_small(a) needs |a| < 1/10, got {a}"),
                    });
                }
                GridFunction::from_fn(grid, |x| 1.0 + a * x.cos())
            }
        }
    }
}
