//! θ-integration rules for sampled spread profiles.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::adaptive_gk;

const ANGLE_TOL: f64 = 1e-9;

/// Weights `w_k` with `Σ_k w_k f(θ_k) ≈ ∫₀^{2π} f(θ) dθ` for π-periodic `f`.
#[derive(Debug, Clone)]
pub(crate) struct ThetaRule {
    pub weights: Vec<f64>,
    pub description: String,
}

/// Picks the rule for strictly increasing angles in `[0, 2π]`.
///
/// Uniform grids starting at 0 and stopping one step short of π or 2π get the
/// periodic trapezoid rule. Grids covering `[0, π]` or `[0, 2π]` with both
/// endpoints get the ordinary trapezoid rule. A `[0, π]` integral is doubled,
/// which is exact because `ΔX_{θ+π} = ΔX_θ`.
pub(crate) fn detect(angles: &[f64]) -> Result<ThetaRule> {
    let n = angles.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!("need at least 2 angles, got {n}")));
    }
    if angles.iter().any(|a| !a.is_finite() || *a < -ANGLE_TOL || *a > 2.0 * PI + ANGLE_TOL) {
        return Err(Error::InsufficientData("angles must lie in [0, 2π]".into()));
    }
    if angles.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InsufficientData("angles must be strictly increasing".into()));
    }
    if angles[0].abs() > ANGLE_TOL {
        return Err(Error::InsufficientData("angle grid must start at 0".into()));
    }
    let last = angles[n - 1];
    let h = last / (n - 1) as f64;
    let is_uniform = angles
        .iter()
        .enumerate()
        .all(|(k, a)| (a - k as f64 * h).abs() <= ANGLE_TOL * (1.0 + k as f64));

    for (period, label) in [(PI, "[0, π)"), (2.0 * PI, "[0, 2π)")] {
        if is_uniform && (last + h - period).abs() <= ANGLE_TOL * n as f64 {
            let scale = 2.0 * PI / period;
            let step = period / n as f64;
            let doubling = if scale > 1.0 { ", doubled by π-periodicity of ΔX_θ" } else { "" };
            return Ok(ThetaRule {
                weights: vec![step * scale; n],
                description: format!("periodic trapezoid over {n} uniform angles on {label}{doubling}"),
            });
        }
    }
    for (period, label) in [(PI, "[0, π]"), (2.0 * PI, "[0, 2π]")] {
        if (last - period).abs() <= ANGLE_TOL {
            let scale = 2.0 * PI / period;
            let mut weights = vec![0.0; n];
            for (k, w) in angles.windows(2).enumerate() {
                let half = 0.5 * (w[1] - w[0]) * scale;
                weights[k] += half;
                weights[k + 1] += half;
            }
            let doubling = if scale > 1.0 { ", doubled by π-periodicity of ΔX_θ" } else { "" };
            return Ok(ThetaRule {
                weights,
                description: format!("trapezoid over {n} angles on {label}{doubling}"),
            });
        }
    }
    Err(Error::InsufficientData(
        "angles must cover [0, π] or [0, 2π], with or without the closing endpoint".into(),
    ))
}

/// Discretization error of `rule` for a spread profile whose variance has the
/// form `a₀ + a₁ cos 2θ + b₁ sin 2θ`, which holds exactly for every pure
/// state. The coefficients are least-squares fitted to `variances`, then the
/// rule applied to the fitted spread is compared against its adaptive
/// integral. Returns infinity when the angles cannot determine the fit.
pub(crate) fn discretization_error(angles: &[f64], rule: &ThetaRule, variances: &[f64]) -> f64 {
    let Some([a0, a1, b1]) = fit_variance(angles, variances) else {
        return f64::INFINITY;
    };
    let spread = |t: f64| (a0 + a1 * (2.0 * t).cos() + b1 * (2.0 * t).sin()).max(0.0).sqrt();
    let discrete: f64 = angles.iter().zip(&rule.weights).map(|(t, w)| w * spread(*t)).sum();
    match adaptive_gk(spread, 0.0, PI, 1e-14, 1e-13, 4000) {
        Ok(exact) => (discrete - 2.0 * exact.value).abs(),
        Err(_) => f64::INFINITY,
    }
}

fn fit_variance(angles: &[f64], v: &[f64]) -> Option<[f64; 3]> {
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for (t, y) in angles.iter().zip(v) {
        let row = [1.0, (2.0 * t).cos(), (2.0 * t).sin()];
        for i in 0..3 {
            atb[i] += row[i] * y;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    solve3(ata, atb)
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    let scale = a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (dst, src) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= f * src;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_half_turn() {
        let angles: Vec<f64> = (0..8).map(|k| k as f64 * PI / 8.0).collect();
        let rule = detect(&angles).unwrap();
        assert!((rule.weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-14);
        assert!(rule.description.contains("doubled"));
    }

    #[test]
    fn closed_full_turn() {
        let angles = [0.0, PI / 2.0, PI, 1.5 * PI, 2.0 * PI];
        let rule = detect(&angles).unwrap();
        assert_eq!(rule.weights, vec![PI / 4.0, PI / 2.0, PI / 2.0, PI / 2.0, PI / 4.0]);
    }

    #[test]
    fn rejects_partial_cover() {
        assert!(detect(&[0.0, 1.0]).is_err());
        assert!(detect(&[0.0]).is_err());
        assert!(detect(&[0.1, PI]).is_err());
        assert!(detect(&[0.0, 2.0, 1.0, PI]).is_err());
    }

    #[test]
    fn fitted_error_is_small_for_dense_grid() {
        let angles: Vec<f64> = (0..32).map(|k| k as f64 * PI / 32.0).collect();
        let v: Vec<f64> = angles.iter().map(|t| 1.0 + 0.8 * (2.0 * t - 0.3).cos()).collect();
        let rule = detect(&angles).unwrap();
        let e = discretization_error(&angles, &rule, &v);
        assert!(e < 1e-6, "{e}");
        let coarse: Vec<f64> = (0..4).map(|k| k as f64 * PI / 4.0).collect();
        let vc: Vec<f64> = coarse.iter().map(|t| 1.0 + 0.8 * (2.0 * t - 0.3).cos()).collect();
        let ec = discretization_error(&coarse, &detect(&coarse).unwrap(), &vc);
        assert!(ec > e);
    }
}
