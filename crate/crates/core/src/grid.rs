//! Uniform periodic grid on the circle of length 2π, spectral transforms,
//! differentiation, quadrature, and the norms/seminorms used by the tracked
//! functionals.
//!
//! Conventions (these are load-bearing; tests pin them):
//! - wavenumbers are integers k ∈ {−n/2+1, …, n/2},
//! - Fourier coefficients are normalized as û(k) = (1/2π)∫ u(x)e^{−ikx} dx,
//!   so the Wiener sums Σ|k|^α|û(k)| come out in the same units as the
//!   continuum definition,
//! - the Nyquist mode k = n/2 is zeroed by odd-order differentiation and by
//!   the Hilbert multiplier (it has no conjugate partner, so keeping it
//!   would break realness),
//! - quadrature is the trapezoid rule Δx·Σ values, exact for trigonometric
//!   polynomials of degree < n/2.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

// ─── FFT plan cache ───────────────────────────────────────────────────────────

#[derive(Clone)]
struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans(n: usize) -> Plans {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plans>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("fft plan cache poisoned");
    map.entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Plans {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            }
        })
        .clone()
}

// ─── Grid ─────────────────────────────────────────────────────────────────────

/// Uniform discretization of the circle [0, 2π) with `n` points, `n` a power
/// of two. Points are x_j = 2π·j/n; the spacing 2π/n is exact in f64 because
/// dividing by a power of two is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::GridSize { n });
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Circumference of the domain (fixed at 2π so wavenumbers are integers).
    pub fn length(&self) -> f64 {
        TAU
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        debug_assert!(j < self.n);
        TAU * j as f64 / self.n as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.point(j))
    }

    /// Highest represented wavenumber, n/2.
    pub fn nyquist(&self) -> i64 {
        (self.n / 2) as i64
    }
}

// ─── GridFunction ─────────────────────────────────────────────────────────────

/// Real samples of a periodic function on a [`Grid`]. Every entry is finite;
/// the constructor enforces it so downstream operations stay total.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect())
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.n()])
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Apply `f` pointwise. Fails only if `f` produces a non-finite sample.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Combine two functions on the same grid pointwise.
    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch {
                left: self.grid.n(),
                right: other.grid.n(),
            });
        }
        Self::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    // ── transforms ──

    /// Discrete Fourier coefficients under û(k) = (1/2π)∫ u e^{−ikx} dx,
    /// realized as (1/n)Σ_j u_j e^{−ik x_j}.
    pub fn to_spectrum(&self) -> SpectrumField {
        let n = self.grid.n();
        let mut buf: Vec<Complex64> = self
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        plans(n).forward.process(&mut buf);
        let scale = 1.0 / n as f64;
        for c in &mut buf {
            *c *= scale;
        }
        SpectrumField {
            grid: self.grid,
            coeffs: buf,
        }
    }

    /// Spectral derivative of the given order (1..=4). Multiplies û(k) by
    /// (ik)^order; the Nyquist mode is zeroed for odd orders.
    pub fn derivative(&self, order: u32) -> Self {
        assert!(
            (1..=4).contains(&order),
            "derivative order must be in 1..=4, got {order}"
        );
        self.to_spectrum().differentiated(order).to_grid_function()
    }

    /// Second-order central difference (f_{j+1} − f_{j−1})/(2Δx) with
    /// periodic wraparound. Exists as an independent oracle for the spectral
    /// derivative; the solver itself never calls it.
    pub fn fd_derivative(&self) -> Self {
        let n = self.grid.n();
        let two_dx = 2.0 * self.grid.spacing();
        let v = &self.values;
        let values = (0..n)
            .map(|j| (v[(j + 1) % n] - v[(j + n - 1) % n]) / two_dx)
            .collect();
        Self::new(self.grid, values).expect("central difference of finite samples is finite")
    }

    // ── quadrature and norms ──

    /// Trapezoid rule Δx·Σ values; on the uniform periodic grid this is
    /// exact for trigonometric polynomials of degree < n/2.
    pub fn quadrature(&self) -> f64 {
        self.grid.spacing() * self.values.iter().sum::<f64>()
    }

    /// Average value ⟨u⟩ = (1/2π)∫u dx.
    pub fn mean(&self) -> f64 {
        self.quadrature() / TAU
    }

    pub fn norm_l1(&self) -> f64 {
        self.grid.spacing() * self.values.iter().map(|v| v.abs()).sum::<f64>()
    }

    pub fn norm_l2(&self) -> f64 {
        (self.grid.spacing() * self.values.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    pub fn norm_linf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    /// Homogeneous W^{1,1} seminorm ∫|∂x u| dx, with ∂x spectral.
    pub fn w11_seminorm(&self) -> f64 {
        self.derivative(1).norm_l1()
    }

    /// Wiener norm Σ_k |k|^α |û(k)| over all represented wavenumbers
    /// (0^0 = 1, so α = 0 includes the mean mode).
    pub fn wiener_norm(&self, alpha: f64) -> f64 {
        self.to_spectrum().wiener_norm(alpha)
    }

    /// Periodic heat semigroup at time κ ≥ 0: û(k) ↦ e^{−κk²}û(k).
    /// κ = 0 is the identity; the mean (mass) is preserved for every κ.
    pub fn heat_mollify(&self, kappa: f64) -> Self {
        assert!(kappa >= 0.0, "mollification time must be >= 0, got {kappa}");
        self.to_spectrum().mollified(kappa).to_grid_function()
    }

    /// Periodic Hilbert transform as the Fourier multiplier −i·sign(k)
    /// (the convolution kernel (1/2π)cot((x−y)/2)); constants map to 0.
    pub fn hilbert(&self) -> Self {
        self.to_spectrum().hilbert_transformed(1.0).to_grid_function()
    }
}

// ─── SpectrumField ────────────────────────────────────────────────────────────

/// Complex Fourier coefficients indexed by integer wavenumber
/// k ∈ {−n/2+1, …, n/2}, stored in FFT layout (index m holds k = m for
/// m ≤ n/2, k = m − n above).
#[derive(Debug, Clone)]
pub struct SpectrumField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectrumField {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Wavenumber held at storage index `m`.
    pub fn wavenumber_at(&self, m: usize) -> i64 {
        let n = self.grid.n() as i64;
        let m = m as i64;
        if m <= n / 2 {
            m
        } else {
            m - n
        }
    }

    /// Coefficient û(k) for k ∈ {−n/2+1, …, n/2}.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let n = self.grid.n() as i64;
        assert!(
            k > -n / 2 && k <= n / 2,
            "wavenumber {k} outside represented range (-{}, {}]",
            n / 2,
            n / 2
        );
        let m = if k >= 0 { k } else { k + n } as usize;
        self.coeffs[m]
    }

    fn multiplied(&self, factor: impl Fn(i64) -> Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| factor(self.wavenumber_at(m)) * c)
            .collect();
        Self {
            grid: self.grid,
            coeffs,
        }
    }

    /// Multiplier (ik)^order; the Nyquist mode is zeroed for odd orders so
    /// the result of an odd derivative stays real.
    pub fn differentiated(&self, order: u32) -> Self {
        let nyq = self.grid.nyquist();
        self.multiplied(|k| {
            if order % 2 == 1 && k == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, k as f64).powu(order)
            }
        })
    }

    /// Heat multiplier e^{−κk²}.
    pub fn mollified(&self, kappa: f64) -> Self {
        self.multiplied(|k| Complex64::new((-kappa * (k * k) as f64).exp(), 0.0))
    }

    /// Hilbert multiplier −i·sign(k), scaled by `sign` (±1, see
    /// `ModelParams::hilbert_sign`). Constants and the Nyquist mode map to 0.
    pub fn hilbert_transformed(&self, sign: f64) -> Self {
        let nyq = self.grid.nyquist();
        self.multiplied(|k| {
            if k == 0 || k == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -sign * (k.signum() as f64))
            }
        })
    }

    /// Wiener sum Σ|k|^α|û(k)| (0^0 = 1).
    pub fn wiener_norm(&self, alpha: f64) -> f64 {
        assert!(alpha >= 0.0, "wiener exponent must be >= 0, got {alpha}");
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| (self.wavenumber_at(m).abs() as f64).powf(alpha) * c.norm())
            .sum()
    }

    /// Inverse transform u_j = Σ_k û(k)e^{ik x_j}; the imaginary residue of
    /// a Hermitian spectrum is dropped.
    pub fn to_grid_function(&self) -> GridFunction {
        let n = self.grid.n();
        let mut buf = self.coeffs.clone();
        plans(n).inverse.process(&mut buf);
        let values = buf.iter().map(|c| c.re).collect();
        GridFunction::new(self.grid, values)
            .expect("inverse transform of finite coefficients is finite")
    }
}

/// Inverse of [`GridFunction::to_spectrum`].
pub fn from_spectrum(spectrum: &SpectrumField) -> GridFunction {
    spectrum.to_grid_function()
}
