//! Incomplete elliptic integral of the second kind,
//! `E(φ|m) = ∫₀^φ √(1 − m sin²λ) dλ`, for any `m ≤ 1` (including the large
//! negative parameters produced by strong squeezing).
//!
//! Amplitudes outside `[-π/2, π/2]` are reduced with
//! `E(φ + jπ | m) = E(φ|m) + 2j·E(m)` and `E(−φ|m) = −E(φ|m)`, where `E(m)` is
//! the complete integral. The baseline evaluates the reduced integral by
//! adaptive Gauss–Kronrod quadrature of the defining integrand; the Carlson
//! symmetric form is available as a faster path.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_gk;

const REL_TOL: f64 = 1e-14;
const MAX_INTERVALS: usize = 20_000;

/// Parameter `m = k²` of an elliptic integral; any finite `m ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParameter(f64);

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self> {
        if m.is_nan() || m > 1.0 || m == f64::NEG_INFINITY {
            return Err(Error::Domain(format!("elliptic parameter must satisfy m <= 1, got {m}")));
        }
        Ok(Self(m))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Splits `φ` into `j·π + ψ` with `ψ ∈ [-π/2, π/2]`.
fn reduce(phi: f64) -> (f64, f64) {
    let j = (phi / PI).round();
    (j, phi - j * PI)
}

fn check_phi(phi: f64) -> Result<()> {
    if !phi.is_finite() {
        return Err(Error::Domain(format!("elliptic amplitude must be finite, got {phi}")));
    }
    Ok(())
}

fn quad_segment(psi: f64, m: f64) -> Result<(f64, f64)> {
    if psi == 0.0 {
        return Ok((0.0, 0.0));
    }
    let r = adaptive_gk(
        |l: f64| {
            let s = l.sin();
            (1.0 - m * s * s).max(0.0).sqrt()
        },
        0.0,
        psi.abs(),
        0.0,
        REL_TOL,
        MAX_INTERVALS,
    )?;
    Ok((psi.signum() * r.value, r.error))
}

/// Complete integral `E(m) = E(π/2 | m)` by adaptive quadrature.
pub fn elliptic_e_complete(m: EllipticParameter) -> Result<f64> {
    Ok(quad_segment(FRAC_PI_2, m.0)?.0)
}

/// `E(φ|m)` together with the quadrature error estimate.
pub fn elliptic_e_incomplete_with_error(phi: f64, m: EllipticParameter) -> Result<(f64, f64)> {
    check_phi(phi)?;
    if m.0 == 0.0 {
        return Ok((phi, 0.0));
    }
    let (j, psi) = reduce(phi);
    let (part, part_err) = quad_segment(psi, m.0)?;
    if j == 0.0 {
        return Ok((part, part_err));
    }
    let (complete, complete_err) = quad_segment(FRAC_PI_2, m.0)?;
    Ok((2.0 * j * complete + part, 2.0 * j.abs() * complete_err + part_err))
}

/// `E(φ|m)` via adaptive quadrature of the defining integral.
pub fn elliptic_e_incomplete(phi: f64, m: EllipticParameter) -> Result<f64> {
    Ok(elliptic_e_incomplete_with_error(phi, m)?.0)
}

/// `E(φ|m)` via Carlson's symmetric integrals `R_F` and `R_D`.
pub fn elliptic_e_incomplete_carlson(phi: f64, m: EllipticParameter) -> Result<f64> {
    check_phi(phi)?;
    let m = m.0;
    if m == 0.0 {
        return Ok(phi);
    }
    let (j, psi) = reduce(phi);
    let part = psi.signum() * carlson_segment(psi.abs(), m);
    if j == 0.0 {
        return Ok(part);
    }
    Ok(2.0 * j * carlson_segment(FRAC_PI_2, m) + part)
}

fn carlson_segment(psi: f64, m: f64) -> f64 {
    if psi == 0.0 {
        return 0.0;
    }
    let (s, c) = psi.sin_cos();
    let c2 = if psi == FRAC_PI_2 { 0.0 } else { c * c };
    let q = 1.0 - m * s * s;
    s * rf(c2, q, 1.0) - m / 3.0 * s * s * s * rd(c2, q, 1.0)
}

fn rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 0.0008;
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let ave = (x + y + z) / 3.0;
        let (dx, dy, dz) = ((ave - x) / ave, (ave - y) / ave, (ave - z) / ave);
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / ave.sqrt();
        }
    }
}

fn rd(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 0.0005;
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.25 * C3;
    const C6: f64 = 1.5 * C4;
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lambda));
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let ave = 0.2 * (x + y + 3.0 * z);
        let (dx, dy, dz) = ((ave - x) / ave, (ave - y) / ave, (ave - z) / ave);
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            return 3.0 * sum
                + fac
                    * (1.0
                        + ed * (-C1 + C5 * ed - C6 * dz * ee)
                        + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea)))
                    / (ave * ave.sqrt());
        }
    }
}
