//! Moments and spread profiles of `X_θ` taken from the tomogram, with the
//! ladder-moment route as a cross-check.

use std::f64::consts::{PI, SQRT_2};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::quadrep::{full, PhaseSlice, WINDOW_SAFETY};
use crate::states::{clamp_variance, ladder_moments, quadrature_stats_analytic, FockExpansion, LadderMoments};

/// How a [`QuadratureProfile`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileMethod {
    /// `∫ xⁿ ω(x, θ) dx` by Gauss–Legendre panels.
    Tomographic,
    /// Ladder-operator moments.
    Analytic,
    /// Empirical moments of homodyne samples.
    Sampled,
}

impl ProfileMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Tomographic => "tomographic",
            Self::Analytic => "analytic",
            Self::Sampled => "sampled",
        }
    }
}

/// Controls for x-integration of tomogram moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TomographicOptions {
    /// Stop once successive panel doublings change every moment by less
    /// than this (relative to `max(1, |moment|)`).
    pub tolerance: f64,
    pub max_panels: usize,
}

impl Default for TomographicOptions {
    fn default() -> Self {
        Self { tolerance: 1e-11, max_panels: 8192 }
    }
}

/// `∫ω dx`, `∫xω dx` and `∫x²ω dx` at one phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomogramMoments {
    pub norm: f64,
    pub first: f64,
    pub second: f64,
}

/// Integrates the first three x-moments of `ω(·, θ)`.
///
/// The window is centred on the ladder-moment mean and extends
/// `WINDOW_SAFETY·√2` standard deviations each way. This is narrower than the
/// global window when the quadrature is squeezed or displaced, yet still
/// drops far less than `1e-10` of the weight. Panels double until the moments
/// settle; the recovered norm must match the expansion's.
pub fn tomogram_moments(exp: &FockExpansion, theta: f64, opts: &TomographicOptions) -> Result<TomogramMoments> {
    if !theta.is_finite() {
        return Err(Error::Domain(format!("θ must be finite, got {theta}")));
    }
    let mom = ladder_moments(exp);
    let mean = mom.quadrature_mean(theta);
    // Sized by the widest quadrature spread rather than the spread at θ: a
    // narrow non-Gaussian slice can still carry tails the local width misses.
    let cov = mom.mean_a2 - mom.mean_a * mom.mean_a;
    let widest = cov.norm() + mom.mean_n - mom.mean_a.norm_sqr() + 0.5;
    let std = if widest > 0.0 { widest.sqrt() } else { std::f64::consts::FRAC_1_SQRT_2 };
    let half = WINDOW_SAFETY * SQRT_2 * std;
    let (lo, hi) = (mean - half, mean + half);

    // Oscillations of ψ_N have wavelength ~2π/√(2N+1); start with about one
    // panel per wavelength.
    let wavelength = 2.0 * PI / (2.0 * exp.truncation_order() as f64 + 1.0).sqrt();
    let mut panels = ((hi - lo) / wavelength).ceil().max(8.0) as usize;

    let slice = PhaseSlice::new(exp, theta)?;
    let rule = GaussLegendre::order16();
    let mut prev = integrate(&slice, rule, lo, hi, panels);
    let mut change = f64::INFINITY;
    loop {
        panels *= 2;
        if panels > opts.max_panels {
            return Err(Error::Nonconvergence { what: "tomographic moment integration", last_change: change });
        }
        let cur = integrate(&slice, rule, lo, hi, panels);
        change = rel_change(prev.norm, cur.norm)
            .max(rel_change(prev.first, cur.first))
            .max(rel_change(prev.second, cur.second));
        if change < opts.tolerance {
            let norm = exp.norm_sqr();
            let deficit = (cur.norm - norm).abs();
            if deficit > 1e-9 * norm {
                return Err(Error::WindowTooSmall { row: 0, deficit, tolerance: 1e-9 });
            }
            return Ok(cur);
        }
        prev = cur;
    }
}

fn rel_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn integrate(slice: &PhaseSlice, rule: &GaussLegendre, lo: f64, hi: f64, panels: usize) -> TomogramMoments {
    let mut m = TomogramMoments { norm: 0.0, first: 0.0, second: 0.0 };
    for (x, w) in rule.composite_points(lo, hi, panels) {
        let wd = w * slice.density(x);
        m.norm += wd;
        m.first += wd * x;
        m.second += wd * x * x;
    }
    m
}

/// `⟨X_θⁿ⟩ = ∫ xⁿ ω(x, θ) dx` for `n ∈ {1, 2}`.
pub fn moment_from_tomogram(exp: &FockExpansion, order: u8, theta: f64) -> Result<f64> {
    let m = tomogram_moments(exp, theta, &TomographicOptions::default())?;
    match order {
        1 => Ok(m.first),
        2 => Ok(m.second),
        _ => Err(Error::InvalidParameter(format!("moment order must be 1 or 2, got {order}"))),
    }
}

/// Mean and spread of `X_θ` from tomogram moments.
pub fn quadrature_stats_tomographic(exp: &FockExpansion, theta: f64, opts: &TomographicOptions) -> Result<(f64, f64)> {
    let m = tomogram_moments(exp, theta, opts)?;
    let var = m.second - m.first * m.first;
    Ok((m.first, clamp_variance(var)?.sqrt()))
}

/// Per-θ mean and standard deviation of the rotated quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureProfile {
    pub theta_values: Vec<f64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub method: ProfileMethod,
}

/// Spread profile of `exp` over `theta_grid`, evaluated in parallel.
pub fn std_profile(exp: &FockExpansion, theta_grid: &[f64], method: ProfileMethod) -> Result<QuadratureProfile> {
    std_profile_with(exp, theta_grid, method, &TomographicOptions::default())
}

pub fn std_profile_with(
    exp: &FockExpansion,
    theta_grid: &[f64],
    method: ProfileMethod,
    opts: &TomographicOptions,
) -> Result<QuadratureProfile> {
    let mom: LadderMoments = ladder_moments(exp);
    let stats: Vec<(f64, f64)> = match method {
        ProfileMethod::Analytic => theta_grid
            .iter()
            .map(|&t| quadrature_stats_analytic(&mom, t))
            .collect::<Result<_>>()?,
        ProfileMethod::Tomographic => theta_grid
            .par_iter()
            .map(|&t| quadrature_stats_tomographic(exp, t, opts))
            .collect::<Result<_>>()?,
        ProfileMethod::Sampled => {
            return Err(Error::InvalidParameter("sampled profiles come from homodyne data".into()))
        }
    };
    let (mean, std) = stats.into_iter().unzip();
    Ok(QuadratureProfile { theta_values: theta_grid.to_vec(), mean, std, method })
}

impl QuadratureProfile {
    /// CSV with header `theta,mean,std`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta", "mean", "std"])?;
        for ((t, m), s) in self.theta_values.iter().zip(&self.mean).zip(&self.std) {
            w.write_record([full(*t), full(*m), full(*s)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self, spec: &str) -> serde_json::Value {
        serde_json::json!({
            "spec": spec,
            "method": self.method,
            "theta": self.theta_values,
            "mean": self.mean,
            "std": self.std,
        })
    }

    /// Smallest `std(θ)·std(θ+π/2)` over pairs present in the grid, if any.
    pub fn min_conjugate_product(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, t) in self.theta_values.iter().enumerate() {
            let target = t + PI / 2.0;
            if let Some(j) = self.theta_values.iter().position(|u| (u - target).abs() < 1e-12) {
                let p = self.std[i] * self.std[j];
                best = Some(best.map_or(p, |b| b.min(p)));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{expand, Squeezing, StateSpec, DEFAULT_TAIL_TOLERANCE};
    use num_complex::Complex64;

    #[test]
    fn vacuum_moments() {
        let vac = FockExpansion::basis(0);
        for &t in &[0.0, 0.7, 3.0] {
            assert!(moment_from_tomogram(&vac, 1, t).unwrap().abs() < 1e-13);
            assert!((moment_from_tomogram(&vac, 2, t).unwrap() - 0.5).abs() < 1e-12);
        }
        assert!(moment_from_tomogram(&vac, 3, 0.0).is_err());
    }

    #[test]
    fn squeezed_second_moment() {
        let e = expand(&StateSpec::SqueezedVacuum { squeeze: Squeezing::new(0.5, 0.0) }, 1e-13).unwrap();
        let m2 = moment_from_tomogram(&e, 2, 0.0).unwrap();
        assert!((m2 - (-1.0f64).exp() / 2.0).abs() < 1e-9, "{m2}");
    }

    #[test]
    fn constant_profiles() {
        let grid: Vec<f64> = (0..9).map(|k| k as f64 * PI / 8.0).collect();
        let coh = expand(&StateSpec::Coherent { alpha: Complex64::new(2.0, 1.0) }, DEFAULT_TAIL_TOLERANCE).unwrap();
        let fock = FockExpansion::basis(4);
        for m in [ProfileMethod::Analytic, ProfileMethod::Tomographic] {
            let p = std_profile(&coh, &grid, m).unwrap();
            assert!(p.std.iter().all(|s| (s - 0.5f64.sqrt()).abs() < 1e-7));
            let p = std_profile(&fock, &grid, m).unwrap();
            assert!(p.std.iter().all(|s| (s - 4.5f64.sqrt()).abs() < 1e-7));
        }
    }

    #[test]
    fn squeezed_fock_profile() {
        let e = expand(&StateSpec::SqueezedFock { n: 1, squeeze: Squeezing::new(0.3, PI / 2.0) }, 1e-16)
            .unwrap();
        let grid: Vec<f64> = (0..13).map(|k| k as f64 * PI / 12.0).collect();
        let a = std_profile(&e, &grid, ProfileMethod::Analytic).unwrap();
        let t = std_profile(&e, &grid, ProfileMethod::Tomographic).unwrap();
        for (i, th) in grid.iter().enumerate() {
            let expect = 1.5f64.sqrt() * (0.6f64.cosh() - 0.6f64.sinh() * (PI / 2.0 - 2.0 * th).cos()).sqrt();
            assert!((a.std[i] - expect).abs() < 1e-9);
            assert!((t.std[i] - a.std[i]).abs() < 1e-7);
        }
        assert!(a.min_conjugate_product().unwrap() >= 0.5 - 1e-9);
    }

    #[test]
    fn sampled_method_rejected() {
        let vac = FockExpansion::basis(0);
        assert!(std_profile(&vac, &[0.0], ProfileMethod::Sampled).is_err());
    }
}
