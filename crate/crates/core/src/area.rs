//! `σ = ∫₀^{2π} ΔX_θ dθ` and the nonclassical area `σ − √2π`.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{quadrature_stats_tomographic, ProfileMethod, QuadratureProfile, TomographicOptions};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::specialfn::{elliptic_e_incomplete_with_error, EllipticParameter};
use crate::states::{
    expand, ladder_moments, quadrature_stats_analytic, FockExpansion, Squeezing, StateSpec,
};
use crate::theta_rule;

/// `σ` of every coherent state, and the lower bound for all pure states.
pub const CLASSICAL_SIGMA: f64 = SQRT_2 * PI;
/// Default truncation tail for σ. Tighter than the tomogram default because
/// moments are not limited by the Hermite order.
pub const AREA_TAIL_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaMethod {
    Numeric,
    Analytic,
    Sampled,
}

impl AreaMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Numeric => "numeric",
            Self::Analytic => "analytic",
            Self::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaResult {
    pub sigma: f64,
    pub nonclassical_area: f64,
    pub method: AreaMethod,
    pub error_estimate: f64,
    /// How the θ-integral was formed.
    pub integration: String,
}

impl AreaResult {
    pub(crate) fn new(sigma: f64, method: AreaMethod, error_estimate: f64, integration: String) -> Self {
        Self { sigma, nonclassical_area: sigma - CLASSICAL_SIGMA, method, error_estimate, integration }
    }
}

/// Controls for [`sigma_numeric`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaOptions {
    /// Fock truncation tail tolerance used when expanding a [`StateSpec`].
    pub tail_tolerance: f64,
    /// Relative θ-refinement target.
    pub tolerance: f64,
    /// Where `ΔX_θ` comes from. `Analytic` uses ladder moments, which are
    /// exact for the truncated state and far cheaper; `Tomographic`
    /// integrates the tomogram at every θ node.
    pub profile: ProfileMethod,
    pub tomographic: TomographicOptions,
    /// Panel budget for the θ-quadrature.
    pub max_panels: usize,
}

impl Default for AreaOptions {
    fn default() -> Self {
        Self {
            tail_tolerance: AREA_TAIL_TOLERANCE,
            tolerance: 1e-9,
            profile: ProfileMethod::Analytic,
            tomographic: TomographicOptions::default(),
            max_panels: 1024,
        }
    }
}

/// θ-quadrature of `ΔX_θ` for an expanded state.
///
/// Composite 16-point Gauss–Legendre over `[0, π]`, doubled: `ΔX_θ` is
/// π-periodic because `ω(x, θ+π) = ω(−x, θ)`. Panels double from 2 until two
/// successive estimates agree to `opts.tolerance` (relative); their
/// difference is the reported error.
pub fn sigma_numeric(exp: &FockExpansion, opts: &AreaOptions) -> Result<AreaResult> {
    let mom = ladder_moments(exp);
    let spread = |t: f64| -> Result<f64> {
        match opts.profile {
            ProfileMethod::Analytic => quadrature_stats_analytic(&mom, t).map(|s| s.1),
            ProfileMethod::Tomographic => quadrature_stats_tomographic(exp, t, &opts.tomographic).map(|s| s.1),
            ProfileMethod::Sampled => Err(Error::InvalidParameter("sampled profiles come from homodyne data".into())),
        }
    };
    let half_turn = |panels: usize| -> Result<f64> {
        let pts = GaussLegendre::order16().composite_points(0.0, PI, panels);
        let values: Vec<f64> = match opts.profile {
            ProfileMethod::Tomographic => pts.par_iter().map(|(t, w)| spread(*t).map(|s| w * s)).collect::<Result<_>>()?,
            _ => pts.iter().map(|(t, w)| spread(*t).map(|s| w * s)).collect::<Result<_>>()?,
        };
        Ok(values.iter().sum())
    };

    let mut panels = 2;
    let mut prev = half_turn(panels)?;
    let mut change = f64::INFINITY;
    loop {
        panels *= 2;
        if panels > opts.max_panels {
            return Err(Error::Nonconvergence { what: "θ-quadrature of ΔX_θ", last_change: 2.0 * change });
        }
        let cur = half_turn(panels)?;
        change = (cur - prev).abs();
        if change <= opts.tolerance * cur.abs().max(1.0) {
            let integration = format!(
                "composite 16-point Gauss-Legendre on [0, π] with {panels} panels ({} profile), doubled by π-periodicity of ΔX_θ",
                opts.profile.as_str()
            );
            return Ok(AreaResult::new(2.0 * cur, AreaMethod::Numeric, 2.0 * change, integration));
        }
        prev = cur;
    }
}

/// Expands `spec` at `opts.tail_tolerance` and runs [`sigma_numeric`].
pub fn sigma_numeric_spec(spec: &StateSpec, opts: &AreaOptions) -> Result<AreaResult> {
    sigma_numeric(&expand(spec, opts.tail_tolerance)?, opts)
}

/// θ-integral of a precomputed profile.
///
/// The angles must be sorted and cover `[0, π]` or `[0, 2π]` (see the rule
/// descriptions in the result). The error estimate is the rule's error on the
/// exact `√(a₀ + a₁cos2θ + b₁sin2θ)` form fitted to the profile.
pub fn sigma_from_profile(profile: &QuadratureProfile) -> Result<AreaResult> {
    let rule = theta_rule::detect(&profile.theta_values)?;
    let sigma: f64 = rule.weights.iter().zip(&profile.std).map(|(w, s)| w * s).sum();
    let variances: Vec<f64> = profile.std.iter().map(|s| s * s).collect();
    let error = theta_rule::discretization_error(&profile.theta_values, &rule, &variances);
    let method = match profile.method {
        ProfileMethod::Sampled => AreaMethod::Sampled,
        _ => AreaMethod::Numeric,
    };
    Ok(AreaResult::new(sigma, method, error, format!("{} ({} profile)", rule.description, profile.method.as_str())))
}

/// `σ(|n⟩) = √(2(2n+1))·π`.
pub fn sigma_fock(n: usize) -> f64 {
    (2.0 * (2.0 * n as f64 + 1.0)).sqrt() * PI
}

/// `σ(|ξ⟩) = (e^{−r}/√2)[E(2π − δ/2 | k²) + E(δ/2 | k²)]` with
/// `k² = 1 − e^{4r}`, and its evaluation error bound.
fn sigma_squeezed_vacuum(sq: Squeezing) -> Result<(f64, f64)> {
    let m = EllipticParameter::new(-(4.0 * sq.r).exp_m1())?;
    let (e1, err1) = elliptic_e_incomplete_with_error(2.0 * PI - sq.delta / 2.0, m)?;
    let (e2, err2) = elliptic_e_incomplete_with_error(sq.delta / 2.0, m)?;
    let pref = (-sq.r).exp() / SQRT_2;
    Ok((pref * (e1 + e2), pref * (err1 + err2)))
}

/// Closed-form `σ` where one exists.
///
/// Squeezed Fock states use `√(2n+1)·σ(|ξ⟩)`, which follows from the spread
/// `√(n+½)·√(cosh 2r − sinh 2r cos(δ−2θ))`; displaced variants share the
/// value of their undisplaced counterpart.
pub fn sigma_analytic(spec: &StateSpec) -> Result<AreaResult> {
    spec.validate()?;
    let (sigma, error, what) = match spec {
        StateSpec::Coherent { .. } => (CLASSICAL_SIGMA, 0.0, "coherent-state constant √2π".to_string()),
        StateSpec::Fock { n } => (sigma_fock(*n), 0.0, format!("√(2(2n+1))π with n = {n}")),
        StateSpec::SqueezedVacuum { squeeze } => {
            let (s, e) = sigma_squeezed_vacuum(*squeeze)?;
            (s, e, "incomplete elliptic integrals of the second kind".to_string())
        }
        StateSpec::SqueezedFock { n, squeeze } | StateSpec::DisplacedSqueezedFock { n, squeeze, .. } => {
            let (s, e) = sigma_squeezed_vacuum(*squeeze)?;
            let f = (2.0 * *n as f64 + 1.0).sqrt();
            (f * s, f * e, format!("√(2n+1) × squeezed-vacuum elliptic form with n = {n}"))
        }
        StateSpec::PhotonAddedCoherent { .. } => return Err(Error::NoClosedForm("photon-added coherent")),
        StateSpec::EvenOddCoherent { .. } => return Err(Error::NoClosedForm("even/odd coherent")),
        StateSpec::CustomFock { .. } => return Err(Error::NoClosedForm("custom Fock-basis")),
    };
    Ok(AreaResult::new(sigma, AreaMethod::Analytic, error, what))
}

/// Both sides of `σ(|n,ξ⟩) = σ(|n⟩)·σ(|ξ⟩)/√2π`, each side computed
/// numerically from its own expansion.
pub fn product_relation_check(n: usize, squeeze: Squeezing, opts: &AreaOptions) -> Result<(f64, f64)> {
    let lhs = sigma_numeric_spec(&StateSpec::SqueezedFock { n, squeeze }, opts)?.sigma;
    let vac = sigma_numeric_spec(&StateSpec::SqueezedVacuum { squeeze }, opts)?.sigma;
    let fock = sigma_numeric_spec(&StateSpec::Fock { n }, opts)?.sigma;
    Ok((lhs, fock * vac / CLASSICAL_SIGMA))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn coherent_floor() {
        let r = sigma_numeric_spec(&StateSpec::Coherent { alpha: Complex64::new(1.0, 2.0) }, &AreaOptions::default())
            .unwrap();
        assert!((r.sigma - CLASSICAL_SIGMA).abs() < 1e-8);
        assert!(r.nonclassical_area.abs() < 1e-8);
        assert!(r.integration.contains("doubled"));
    }

    #[test]
    fn fock_one() {
        let r = sigma_numeric(&FockExpansion::basis(1), &AreaOptions::default()).unwrap();
        assert!((r.sigma - 6f64.sqrt() * PI).abs() < 1e-10);
        assert!((r.nonclassical_area - (6f64.sqrt() - SQRT_2) * PI).abs() < 1e-10);
    }

    #[test]
    fn analytic_limits() {
        let vac = sigma_analytic(&StateSpec::Fock { n: 0 }).unwrap();
        assert_eq!(vac.nonclassical_area, 0.0);
        let sq = sigma_analytic(&StateSpec::SqueezedVacuum { squeeze: Squeezing::new(1e-9, 1.0) }).unwrap();
        assert!((sq.sigma - CLASSICAL_SIGMA).abs() < 1e-7);
        let sf = sigma_analytic(&StateSpec::SqueezedFock { n: 4, squeeze: Squeezing::new(0.0, 0.0) }).unwrap();
        assert!((sf.sigma - sigma_fock(4)).abs() < 1e-12);
        assert!(matches!(
            sigma_analytic(&StateSpec::EvenOddCoherent { alpha: Complex64::new(1.0, 0.0), h: 0 }),
            Err(Error::NoClosedForm(_))
        ));
    }

    #[test]
    fn squeezed_numeric_matches_elliptic() {
        let opts = AreaOptions { tail_tolerance: 1e-13, ..AreaOptions::default() };
        let spec = StateSpec::SqueezedVacuum { squeeze: Squeezing::new(0.5, 0.0) };
        let n = sigma_numeric_spec(&spec, &opts).unwrap();
        let a = sigma_analytic(&spec).unwrap();
        assert!((n.sigma - a.sigma).abs() < 1e-8 * a.sigma, "{} vs {}", n.sigma, a.sigma);
        assert!((a.sigma - 5.281_157_882_559_285).abs() < 1e-12);
    }

    #[test]
    fn product_relation_trivial_cases() {
        let opts = AreaOptions::default();
        let (l, r) = product_relation_check(0, Squeezing::new(0.8, 1.0), &opts).unwrap();
        assert!((l - r).abs() < 1e-9 * r);
        let (l, r) = product_relation_check(10, Squeezing::new(0.0, 0.0), &opts).unwrap();
        assert!((l - 42f64.sqrt() * PI).abs() < 1e-9 && (r - 42f64.sqrt() * PI).abs() < 1e-9);
    }

    #[test]
    fn profile_integration() {
        let grid: Vec<f64> = (0..64).map(|k| k as f64 * PI / 64.0).collect();
        let e = expand(&StateSpec::SqueezedVacuum { squeeze: Squeezing::new(0.5, 0.4) }, 1e-13).unwrap();
        let p = crate::analysis::std_profile(&e, &grid, ProfileMethod::Analytic).unwrap();
        let r = sigma_from_profile(&p).unwrap();
        assert!((r.sigma - 5.281_157_882_559_285).abs() < 1e-9);
        assert!(r.error_estimate < 1e-9);
    }
}
