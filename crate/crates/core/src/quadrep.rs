//! Quadrature wavefunctions `⟨X_θ, θ|ψ⟩` and optical tomograms
//! `ω(X_θ, θ) = |⟨X_θ, θ|ψ⟩|²`.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specialfn::{hermite_series, MAX_ORDER};
use crate::states::{ladder_moments, FockExpansion};

/// Safety factor of the automatic x-window, in units of `√2·√⟨X²⟩_max`.
pub const WINDOW_SAFETY: f64 = 6.0;
pub const DEFAULT_X_POINTS: usize = 1001;
/// Row-normalization tolerance for exported grids.
pub const EXPORT_GRID_TOLERANCE: f64 = 1e-6;
/// Row-normalization tolerance for internal checks.
pub const CHECK_GRID_TOLERANCE: f64 = 1e-8;

/// An expansion with the phase `e^{-ijθ}` folded into its coefficients, for
/// repeated evaluation at one `θ`.
#[derive(Debug, Clone)]
pub struct PhaseSlice {
    theta: f64,
    rotated: Vec<Complex64>,
}

impl PhaseSlice {
    /// Fails when the expansion is longer than the Hermite functions reach.
    pub fn new(exp: &FockExpansion, theta: f64) -> Result<Self> {
        if exp.truncation_order() > MAX_ORDER {
            return Err(Error::OrderExceeded { order: exp.truncation_order(), max: MAX_ORDER });
        }
        let rotated = exp
            .coefficients()
            .iter()
            .enumerate()
            .map(|(j, c)| c * Complex64::from_polar(1.0, -(j as f64) * theta))
            .collect();
        Ok(Self { theta, rotated })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Amplitude at `x`; non-finite `x` yields NaN.
    pub fn amplitude(&self, x: f64) -> Complex64 {
        if !x.is_finite() {
            return Complex64::new(f64::NAN, f64::NAN);
        }
        hermite_series(&self.rotated, x)
    }

    pub fn density(&self, x: f64) -> f64 {
        self.amplitude(x).norm_sqr()
    }
}

/// `⟨X_θ, θ|ψ⟩ = Σ_j c_j ψ_j(x) e^{−ijθ}`.
pub fn quadrature_amplitude(exp: &FockExpansion, x: f64, theta: f64) -> Result<Complex64> {
    Ok(PhaseSlice::new(exp, theta)?.amplitude(x))
}

/// `ω(x, θ) = |⟨X_θ, θ|ψ⟩|²`.
pub fn tomogram_value(exp: &FockExpansion, x: f64, theta: f64) -> Result<f64> {
    Ok(quadrature_amplitude(exp, x, theta)?.norm_sqr())
}

/// Symmetric window `±S·√2·√⟨X²⟩_max` covering the tomogram at every phase.
pub fn auto_window(exp: &FockExpansion) -> (f64, f64) {
    let half = WINDOW_SAFETY * (2.0 * ladder_moments(exp).max_second_moment()).sqrt();
    (-half, half)
}

/// `ω` sampled on a rectangular `(θ, x)` grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomogramGrid {
    pub theta_values: Vec<f64>,
    pub x_values: Vec<f64>,
    /// `density[i][k] = ω(x_k, θ_i)`.
    pub density: Vec<Vec<f64>>,
}

/// Evaluates the tomogram on a uniform x grid.
///
/// `window = None` selects [`auto_window`]. Every row's trapezoid integral
/// must lie within `grid_tolerance` of the state norm.
pub fn tomogram_grid(
    exp: &FockExpansion,
    theta_grid: &[f64],
    window: Option<(f64, f64)>,
    x_points: usize,
    grid_tolerance: f64,
) -> Result<TomogramGrid> {
    if theta_grid.is_empty() || theta_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParameter("θ grid must be non-empty and finite".into()));
    }
    if x_points < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 x points, got {x_points}")));
    }
    let (lo, hi) = window.unwrap_or_else(|| auto_window(exp));
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!("bad x window ({lo}, {hi})")));
    }
    let x_values = uniform(lo, hi, x_points);
    let h = (hi - lo) / (x_points - 1) as f64;
    let norm = exp.norm_sqr();

    let density: Vec<Vec<f64>> = theta_grid
        .par_iter()
        .map(|&theta| {
            let slice = PhaseSlice::new(exp, theta)?;
            Ok(x_values.iter().map(|&x| slice.density(x)).collect())
        })
        .collect::<Result<_>>()?;

    for (row, values) in density.iter().enumerate() {
        let deficit = (trapezoid(values, h) - norm).abs();
        if deficit > grid_tolerance {
            return Err(Error::WindowTooSmall { row, deficit, tolerance: grid_tolerance });
        }
    }
    Ok(TomogramGrid { theta_values: theta_grid.to_vec(), x_values, density })
}

pub(crate) fn uniform(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let h = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|k| if k + 1 == points { hi } else { lo + k as f64 * h })
        .collect()
}

/// Sequential trapezoid sum, so results never depend on evaluation order.
pub(crate) fn trapezoid(values: &[f64], h: f64) -> f64 {
    let (first, last) = (values[0], values[values.len() - 1]);
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    h * (inner + 0.5 * (first + last))
}

/// Full-precision decimal form shared by all CSV exports.
pub(crate) fn full(v: f64) -> String {
    format!("{v:.16e}")
}

impl TomogramGrid {
    /// Trapezoid integral of row `i`.
    pub fn row_integral(&self, i: usize) -> f64 {
        let h = (self.x_values[self.x_values.len() - 1] - self.x_values[0])
            / (self.x_values.len() - 1) as f64;
        trapezoid(&self.density[i], h)
    }

    /// CSV with header `theta,x,omega`, one row per grid point.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta", "x", "omega"])?;
        for (theta, row) in self.theta_values.iter().zip(&self.density) {
            let t = full(*theta);
            for (x, omega) in self.x_values.iter().zip(row) {
                w.write_record([t.as_str(), &full(*x), &full(*omega)])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// JSON document with the grid and the metadata needed to regenerate it.
    pub fn to_json(&self, spec: &str, truncation_order: usize) -> serde_json::Value {
        serde_json::json!({
            "spec": spec,
            "truncation_order": truncation_order,
            "window": [self.x_values[0], self.x_values[self.x_values.len() - 1]],
            "theta": self.theta_values,
            "x": self.x_values,
            "omega": self.density,
        })
    }
}

/// Closed-form quadrature representations that do not go through the
/// Fock sum. They serve as the second path in two-path agreement checks.
pub mod closed_form {
    use std::f64::consts::{PI, SQRT_2};

    use num_complex::Complex64;

    use crate::error::{Error, Result};
    use crate::specialfn::{laguerre, ln_factorial};

    /// Coherent-state amplitude
    /// `π^{-1/4} exp[−x²/2 − α²e^{−2iθ}/2 − |α|²/2 + √2 α x e^{−iθ}]`.
    pub fn coherent_amplitude(alpha: Complex64, x: f64, theta: f64) -> Complex64 {
        let rot = Complex64::from_polar(1.0, -theta);
        let exponent = -0.5 * x * x - 0.5 * alpha * alpha * rot * rot - 0.5 * alpha.norm_sqr()
            + SQRT_2 * alpha * x * rot;
        exponent.exp() * PI.powf(-0.25)
    }

    /// `e^{−x²} H_n(x)² / (√π 2^n n!)` with `H_n` from the unnormalized
    /// physicists' recurrence. Only meaningful while `H_n(x)` fits in an
    /// `f64` (roughly `n ≤ 150` for moderate `x`).
    pub fn fock_tomogram(n: usize, x: f64) -> f64 {
        let (mut h0, mut h1) = (1.0_f64, 2.0 * x);
        let hn = if n == 0 {
            h0
        } else {
            for k in 1..n {
                let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
                h0 = h1;
                h1 = h2;
            }
            h1
        };
        let log_norm = 0.5 * PI.ln() + n as f64 * std::f64::consts::LN_2 + ln_factorial(n);
        (-x * x).exp() * hn * hn * (-log_norm).exp()
    }

    /// Even/odd coherent tomogram as the four-term cross expansion
    /// `N_h² Σ_{r,r'} e^{iπ(r−r')h} Q_{αe^{iπr}} Q*_{αe^{iπr'}}`.
    pub fn even_odd_tomogram(alpha: Complex64, h: u8, x: f64, theta: f64) -> f64 {
        let q = [coherent_amplitude(alpha, x, theta), coherent_amplitude(-alpha, x, theta)];
        let sign = if h == 0 { 1.0 } else { -1.0 };
        let a2 = alpha.norm_sqr();
        let overlap = if h == 0 { 1.0 + (-2.0 * a2).exp() } else { -(-2.0 * a2).exp_m1() };
        let nh2 = 1.0 / (2.0 * overlap);
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..2 {
            for rp in 0..2 {
                let phase = if (r + rp) % 2 == 0 { 1.0 } else { sign };
                acc += q[r] * q[rp].conj() * phase;
            }
        }
        nh2 * acc.re
    }

    /// Photon-added coherent amplitude in position form.
    ///
    /// On quadrature wavefunctions `a†` acts as `e^{−iθ}(x − ∂_x)/√2`, and
    /// `(x − ∂_x)^m` applied to the coherent Gaussian yields
    /// `H_m(x − α e^{−iθ}/√2)` times that Gaussian, so
    /// `⟨X_θ|α,m⟩ = e^{−imθ} 2^{−m/2} H_m(x − αe^{−iθ}/√2) Q_α(x, θ) / √(m! L_m(−|α|²))`.
    pub fn photon_added_amplitude(alpha: Complex64, m: usize, x: f64, theta: f64) -> Result<Complex64> {
        let rot = Complex64::from_polar(1.0, -theta);
        let y = x - alpha * rot / SQRT_2;
        let (mut h0, mut h1) = (Complex64::new(1.0, 0.0), 2.0 * y);
        let hm = if m == 0 {
            h0
        } else {
            for k in 1..m {
                let h2 = 2.0 * y * h1 - 2.0 * k as f64 * h0;
                h0 = h1;
                h1 = h2;
            }
            h1
        };
        let lag = laguerre(m, -alpha.norm_sqr())?;
        if !(lag.is_finite() && lag > 0.0) {
            return Err(Error::Domain(format!("L_{m}(−|α|²) = {lag}")));
        }
        let log_scale = -0.5 * (m as f64 * std::f64::consts::LN_2 + ln_factorial(m) + lag.ln());
        Ok(Complex64::from_polar(log_scale.exp(), -(m as f64) * theta)
            * hm
            * coherent_amplitude(alpha, x, theta))
    }
}
