//! Pure single-mode states in a truncated photon-number basis.
//!
//! [`StateSpec`] names a state family and its parameters; [`expand`] turns it
//! into a [`FockExpansion`] whose discarded tail weight stays below a chosen
//! tolerance. [`ladder_moments`] and [`quadrature_stats_analytic`] give the
//! exact first and second moments of the rotated quadrature
//! `X_θ = (a e^{-iθ} + a† e^{iθ})/√2` (ħ = 1) from the expansion.

mod coefficients;
mod displacement;
mod text;

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specialfn::MAX_ORDER;

pub use displacement::displace;
pub use text::{parse_complex, ParseSpecError};

/// Default probability weight allowed above the truncation order.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;
/// Longest Fock expansion, `c_0..=c_N` with `N ≤ MAX_TRUNCATION`. Moment and
/// area computations accept any such expansion; quadrature wavefunctions
/// and tomograms need `N ≤ MAX_ORDER`.
pub const MAX_TRUNCATION: usize = 4 * MAX_ORDER;
/// Largest tail tolerance accepted by [`expand`].
pub const MAX_TAIL_TOLERANCE: f64 = 1e-4;
/// Allowed deviation from unit norm for user-supplied coefficient vectors.
pub const CUSTOM_NORM_TOLERANCE: f64 = 1e-10;

/// Squeezing parameter `ξ = r e^{iδ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squeezing {
    pub r: f64,
    pub delta: f64,
}

impl Squeezing {
    pub fn new(r: f64, delta: f64) -> Self {
        Self { r, delta }
    }

    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.delta)
    }
}

/// A state family together with its physical parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Fock { n: usize },
    Coherent { alpha: Complex64 },
    SqueezedVacuum { squeeze: Squeezing },
    SqueezedFock { n: usize, squeeze: Squeezing },
    /// `D(α) S(ξ) |n⟩`; with `n = 0` this is the squeezed coherent state.
    DisplacedSqueezedFock { alpha: Complex64, n: usize, squeeze: Squeezing },
    /// `N a†^m |α⟩`.
    PhotonAddedCoherent { alpha: Complex64, m: usize },
    /// `N_h (|α⟩ + (−1)^h |−α⟩)`; `h = 0` even, `h = 1` odd.
    EvenOddCoherent { alpha: Complex64, h: u8 },
    CustomFock { coefficients: Vec<Complex64> },
}

impl StateSpec {
    /// Short family tag used in the text form and in reports.
    pub fn family(&self) -> &'static str {
        match self {
            StateSpec::Fock { .. } => "fock",
            StateSpec::Coherent { .. } => "coherent",
            StateSpec::SqueezedVacuum { .. } => "sqvac",
            StateSpec::SqueezedFock { .. } => "sqfock",
            StateSpec::DisplacedSqueezedFock { .. } => "dsqfock",
            StateSpec::PhotonAddedCoherent { .. } => "pacs",
            StateSpec::EvenOddCoherent { .. } => "cat",
            StateSpec::CustomFock { .. } => "custom",
        }
    }

    /// Checks parameter ranges.
    pub fn validate(&self) -> Result<()> {
        fn finite_c(name: &str, z: Complex64) -> Result<()> {
            if z.re.is_finite() && z.im.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be finite")))
            }
        }
        fn order(name: &str, n: usize) -> Result<()> {
            if n > MAX_ORDER {
                Err(Error::InvalidParameter(format!("{name}={n} exceeds {MAX_ORDER}")))
            } else {
                Ok(())
            }
        }
        fn squeeze(s: &Squeezing) -> Result<()> {
            if !s.r.is_finite() || s.r < 0.0 {
                return Err(Error::InvalidParameter(format!("r must be finite and >= 0, got {}", s.r)));
            }
            if !s.delta.is_finite() {
                return Err(Error::InvalidParameter("delta must be finite".into()));
            }
            Ok(())
        }
        match self {
            StateSpec::Fock { n } => order("n", *n),
            StateSpec::Coherent { alpha } => finite_c("alpha", *alpha),
            StateSpec::SqueezedVacuum { squeeze: s } => squeeze(s),
            StateSpec::SqueezedFock { n, squeeze: s } => {
                order("n", *n)?;
                squeeze(s)
            }
            StateSpec::DisplacedSqueezedFock { alpha, n, squeeze: s } => {
                finite_c("alpha", *alpha)?;
                order("n", *n)?;
                squeeze(s)
            }
            StateSpec::PhotonAddedCoherent { alpha, m } => {
                finite_c("alpha", *alpha)?;
                order("m", *m)
            }
            StateSpec::EvenOddCoherent { alpha, h } => {
                finite_c("alpha", *alpha)?;
                if *h > 1 {
                    return Err(Error::InvalidParameter(format!("h must be 0 or 1, got {h}")));
                }
                if *h == 1 && alpha.norm_sqr() == 0.0 {
                    return Err(Error::InvalidParameter(
                        "odd coherent state is undefined at alpha = 0".into(),
                    ));
                }
                Ok(())
            }
            StateSpec::CustomFock { coefficients } => {
                if coefficients.is_empty() || coefficients.len() > MAX_ORDER + 1 {
                    return Err(Error::InvalidParameter(format!(
                        "custom state needs 1..={} coefficients",
                        MAX_ORDER + 1
                    )));
                }
                for c in coefficients {
                    finite_c("coefficient", *c)?;
                }
                let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
                if (norm - 1.0).abs() > CUSTOM_NORM_TOLERANCE {
                    return Err(Error::InvalidParameter(format!(
                        "custom coefficients must have unit norm (got {norm})"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Truncated photon-number expansion `Σ_{j≤N} c_j |j⟩`.
///
/// Coefficients are renormalized after truncation; `tail_mass` records the
/// weight that was dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct FockExpansion {
    coefficients: Vec<Complex64>,
    tail_mass: f64,
}

impl FockExpansion {
    /// Wraps a coefficient vector, normalizing it to unit norm.
    pub fn new(coefficients: Vec<Complex64>, tail_mass: f64) -> Result<Self> {
        if coefficients.is_empty() || coefficients.len() > MAX_TRUNCATION + 1 {
            return Err(Error::InvalidParameter("expansion length out of range".into()));
        }
        let norm = coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter("expansion has zero or non-finite norm".into()));
        }
        let coefficients = coefficients.into_iter().map(|c| c / norm).collect();
        Ok(Self { coefficients, tail_mass: tail_mass.max(0.0) })
    }

    pub fn basis(n: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self { coefficients: c, tail_mass: 0.0 }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn truncation_order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Copy with one coefficient multiplied by `factor` and *no*
    /// renormalization. Used to check that the invariant suite notices a
    /// broken state.
    pub fn with_scaled_coefficient(&self, index: usize, factor: f64) -> Self {
        let mut out = self.clone();
        if let Some(c) = out.coefficients.get_mut(index) {
            *c *= factor;
        }
        out
    }
}

/// Expands `spec` in the photon-number basis, truncating where the dropped
/// weight falls below `tail_tolerance`.
pub fn expand(spec: &StateSpec, tail_tolerance: f64) -> Result<FockExpansion> {
    if !(tail_tolerance > 0.0 && tail_tolerance <= MAX_TAIL_TOLERANCE) {
        return Err(Error::InvalidParameter(format!(
            "tail tolerance must lie in (0, {MAX_TAIL_TOLERANCE:e}], got {tail_tolerance:e}"
        )));
    }
    spec.validate()?;
    match spec {
        StateSpec::Fock { n } => Ok(FockExpansion::basis(*n)),
        StateSpec::CustomFock { coefficients } => FockExpansion::new(coefficients.clone(), 0.0),
        StateSpec::Coherent { alpha } => {
            coefficients::truncate(8, tail_tolerance, |j| coefficients::coherent(*alpha, j))
        }
        StateSpec::SqueezedVacuum { squeeze } => coefficients::truncate(8, tail_tolerance, |j| {
            coefficients::squeezed_fock(0, *squeeze, j)
        }),
        StateSpec::SqueezedFock { n, squeeze } => {
            coefficients::truncate(*n + 8, tail_tolerance, |j| {
                coefficients::squeezed_fock(*n, *squeeze, j)
            })
        }
        StateSpec::PhotonAddedCoherent { alpha, m } => {
            if alpha.norm_sqr() == 0.0 {
                return Ok(FockExpansion::basis(*m));
            }
            let log_norm = coefficients::photon_added_log_norm(*alpha, *m)?;
            coefficients::truncate(*m + 8, tail_tolerance, |j| {
                coefficients::photon_added(*alpha, *m, log_norm, j)
            })
        }
        StateSpec::EvenOddCoherent { alpha, h } => coefficients::truncate(8, tail_tolerance, |j| {
            coefficients::even_odd(*alpha, *h, j)
        }),
        StateSpec::DisplacedSqueezedFock { alpha, n, squeeze } => {
            let inner = expand(&StateSpec::SqueezedFock { n: *n, squeeze: *squeeze }, tail_tolerance / 2.0)?;
            displacement::expand_displaced(&inner, *alpha, tail_tolerance)
        }
    }
}

/// `⟨a⟩`, `⟨a²⟩` and `⟨a†a⟩` of a pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderMoments {
    pub mean_a: Complex64,
    pub mean_a2: Complex64,
    pub mean_n: f64,
}

impl LadderMoments {
    /// `⟨X_θ⟩ = √2 Re(⟨a⟩ e^{-iθ})`.
    pub fn quadrature_mean(&self, theta: f64) -> f64 {
        SQRT_2 * (self.mean_a * Complex64::from_polar(1.0, -theta)).re
    }

    /// `⟨X_θ²⟩ = Re(⟨a²⟩ e^{-2iθ}) + ⟨a†a⟩ + 1/2`.
    pub fn quadrature_second_moment(&self, theta: f64) -> f64 {
        (self.mean_a2 * Complex64::from_polar(1.0, -2.0 * theta)).re + self.mean_n + 0.5
    }

    /// `max_θ ⟨X_θ²⟩`.
    pub fn max_second_moment(&self) -> f64 {
        self.mean_a2.norm() + self.mean_n + 0.5
    }
}

/// Exact ladder moments of the (truncated) expansion.
pub fn ladder_moments(exp: &FockExpansion) -> LadderMoments {
    let c = exp.coefficients();
    let mut mean_a = Complex64::new(0.0, 0.0);
    let mut mean_a2 = Complex64::new(0.0, 0.0);
    let mut mean_n = 0.0;
    for j in 0..c.len() {
        let jf = j as f64;
        mean_n += jf * c[j].norm_sqr();
        if j + 1 < c.len() {
            mean_a += c[j].conj() * c[j + 1] * (jf + 1.0).sqrt();
        }
        if j + 2 < c.len() {
            mean_a2 += c[j].conj() * c[j + 2] * ((jf + 1.0) * (jf + 2.0)).sqrt();
        }
    }
    LadderMoments { mean_a, mean_a2, mean_n }
}

/// Variances in `[-VARIANCE_CLAMP, 0)` are rounding noise and clamp to zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;

/// Mean and standard deviation of `X_θ` from ladder moments.
pub fn quadrature_stats_analytic(mom: &LadderMoments, theta: f64) -> Result<(f64, f64)> {
    let mean = mom.quadrature_mean(theta);
    let var = mom.quadrature_second_moment(theta) - mean * mean;
    Ok((mean, clamp_variance(var)?.sqrt()))
}

pub(crate) fn clamp_variance(var: f64) -> Result<f64> {
    if var < -VARIANCE_CLAMP || var.is_nan() {
        return Err(Error::NegativeVariance(var));
    }
    Ok(var.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fock_is_basis_vector() {
        let e = expand(&StateSpec::Fock { n: 3 }, DEFAULT_TAIL_TOLERANCE).unwrap();
        assert_eq!(e.coefficients(), &[c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
        assert_eq!(e.tail_mass(), 0.0);
    }

    #[test]
    fn zero_squeezing_is_vacuum() {
        for &delta in &[0.0, 1.3, 5.0] {
            let e = expand(
                &StateSpec::SqueezedVacuum { squeeze: Squeezing::new(0.0, delta) },
                DEFAULT_TAIL_TOLERANCE,
            )
            .unwrap();
            assert_eq!(e.coefficients()[0], c(1.0, 0.0));
            assert!(e.coefficients()[1..].iter().all(|z| z.norm() == 0.0));
        }
    }

    #[test]
    fn photon_added_at_zero_amplitude_is_fock() {
        let e = expand(
            &StateSpec::PhotonAddedCoherent { alpha: c(0.0, 0.0), m: 4 },
            DEFAULT_TAIL_TOLERANCE,
        )
        .unwrap();
        assert_eq!(e, FockExpansion::basis(4));
    }

    #[test]
    fn invalid_parameters() {
        let tol = DEFAULT_TAIL_TOLERANCE;
        let bad_r = StateSpec::SqueezedVacuum { squeeze: Squeezing::new(-0.1, 0.0) };
        assert!(matches!(expand(&bad_r, tol), Err(Error::InvalidParameter(_))));
        let bad_h = StateSpec::EvenOddCoherent { alpha: c(1.0, 0.0), h: 2 };
        assert!(matches!(expand(&bad_h, tol), Err(Error::InvalidParameter(_))));
        let odd_vac = StateSpec::EvenOddCoherent { alpha: c(0.0, 0.0), h: 1 };
        assert!(expand(&odd_vac, tol).is_err());
        assert!(expand(&StateSpec::Fock { n: 1 }, 0.0).is_err());
        assert!(expand(&StateSpec::Fock { n: 1 }, 1e-3).is_err());
        let unnormalized = StateSpec::CustomFock { coefficients: vec![c(1.0, 0.0), c(0.1, 0.0)] };
        assert!(expand(&unnormalized, tol).is_err());
    }

    #[test]
    fn truncation_failure_when_order_runs_out() {
        let spec = StateSpec::Coherent { alpha: c(60.0, 0.0) };
        assert!(matches!(
            expand(&spec, DEFAULT_TAIL_TOLERANCE),
            Err(Error::TruncationFailure { .. })
        ));
    }

    #[test]
    fn long_expansions_beyond_hermite_range() {
        let e = expand(&StateSpec::Coherent { alpha: c(30.0, 0.0) }, 1e-16).unwrap();
        assert!(e.truncation_order() > MAX_ORDER && e.truncation_order() <= MAX_TRUNCATION);
        let (mean, std) = quadrature_stats_analytic(&ladder_moments(&e), 0.0).unwrap();
        assert!((mean - 30.0 * std::f64::consts::SQRT_2).abs() < 1e-8);
        // ⟨X²⟩ ≈ 1800 here, so the variance loses about three digits
        assert!((std - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert!(matches!(
            crate::quadrep::tomogram_value(&e, 0.0, 0.0),
            Err(Error::OrderExceeded { .. })
        ));
    }

    #[test]
    fn fock_and_coherent_moments() {
        let m = ladder_moments(&FockExpansion::basis(5));
        assert_eq!(m.mean_a, c(0.0, 0.0));
        assert_eq!(m.mean_a2, c(0.0, 0.0));
        assert_eq!(m.mean_n, 5.0);

        let alpha = c(1.2, -0.7);
        let e = expand(&StateSpec::Coherent { alpha }, 1e-12).unwrap();
        let m = ladder_moments(&e);
        assert!((m.mean_a - alpha).norm() < 1e-10);
        assert!((m.mean_a2 - alpha * alpha).norm() < 1e-10);
        assert!((m.mean_n - alpha.norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn squeezed_vacuum_moments_match_bogoliubov() {
        // S†aS = a cosh r − a† e^{iδ} sinh r on the vacuum gives
        // ⟨a⟩ = 0, ⟨a²⟩ = −e^{iδ} sinh r cosh r, ⟨a†a⟩ = sinh² r.
        let (r, delta) = (0.8, 2.1);
        let e = expand(
            &StateSpec::SqueezedVacuum { squeeze: Squeezing::new(r, delta) },
            1e-13,
        )
        .unwrap();
        let m = ladder_moments(&e);
        let expect_a2 = -Complex64::from_polar(r.sinh() * r.cosh(), delta);
        assert!(m.mean_a.norm() < 1e-14);
        assert!((m.mean_a2 - expect_a2).norm() < 1e-10);
        assert!((m.mean_n - r.sinh().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn analytic_stats_closed_forms() {
        let coh = ladder_moments(&expand(&StateSpec::Coherent { alpha: c(2.0, 1.0) }, 1e-12).unwrap());
        let fock = ladder_moments(&FockExpansion::basis(3));
        let (r, delta) = (0.6, 0.9);
        let sq = ladder_moments(
            &expand(&StateSpec::SqueezedVacuum { squeeze: Squeezing::new(r, delta) }, 1e-13).unwrap(),
        );
        for k in 0..12 {
            let theta = k as f64 * PI / 6.0;
            let (_, s) = quadrature_stats_analytic(&coh, theta).unwrap();
            assert!((s - 0.5f64.sqrt()).abs() < 1e-9);
            let (m, s) = quadrature_stats_analytic(&fock, theta).unwrap();
            assert_eq!(m, 0.0);
            assert!((s - 3.5f64.sqrt()).abs() < 1e-14);
            let (_, s) = quadrature_stats_analytic(&sq, theta).unwrap();
            let expect = (((2.0 * r).cosh() - (2.0 * r).sinh() * (delta - 2.0 * theta).cos()) / 2.0).sqrt();
            assert!((s - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn variance_clamp() {
        assert_eq!(clamp_variance(-5e-13).unwrap(), 0.0);
        assert!(matches!(clamp_variance(-1e-9), Err(Error::NegativeVariance(_))));
        let bogus = LadderMoments { mean_a: c(3.0, 0.0), mean_a2: c(0.0, 0.0), mean_n: 0.0 };
        assert!(quadrature_stats_analytic(&bogus, 0.0).is_err());
    }
}
