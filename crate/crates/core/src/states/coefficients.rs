//! Closed-form photon-number amplitudes for each state family.

use num_complex::Complex64;

use super::{FockExpansion, Squeezing};
use crate::error::{Error, Result};
use super::MAX_TRUNCATION;
use crate::specialfn::{hermite_at_zero_loglike, laguerre, ln_binomial, ln_factorial};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Coefficients may be evaluated this far to measure the tail, even though
/// at most `MAX_TRUNCATION + 1` are kept.
pub(super) const TAIL_SCAN_LIMIT: usize = 2 * MAX_TRUNCATION;

/// Evaluates `coeff` on a growing prefix (doubling from `start`) until the
/// tail is settled, then keeps the shortest prefix `c_0..=c_N` whose dropped
/// weight `Σ_{j>N} |c_j|²` is at most `tol`.
///
/// The dropped weight is summed term by term rather than taken as
/// `1 − Σ_{j≤N} |c_j|²`, so tolerances far below machine epsilon work.
pub(super) fn truncate<F>(start: usize, tol: f64, coeff: F) -> Result<FockExpansion>
where
    F: Fn(usize) -> Complex64,
{
    let mut len = start.clamp(16, TAIL_SCAN_LIMIT);
    let mut coeffs: Vec<Complex64> = Vec::new();
    loop {
        coeffs.extend((coeffs.len()..len).map(&coeff));
        if tail_settled(&coeffs, tol) || len == TAIL_SCAN_LIMIT {
            break;
        }
        len = (len * 2).min(TAIL_SCAN_LIMIT);
    }
    trim_and_wrap(coeffs, tol)
}

/// True once the weight is accounted for and the last quarter of the
/// coefficients is both negligible and no longer growing.
pub(super) fn tail_settled(coeffs: &[Complex64], tol: f64) -> bool {
    let n = coeffs.len();
    if n < 8 {
        return false;
    }
    let mass: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if 1.0 - mass > tol + 1e-12 {
        return false;
    }
    let quarter = |k: usize| {
        coeffs[k * n / 4..(k + 1) * n / 4].iter().map(|c| c.norm_sqr()).fold(0.0, f64::max)
    };
    let (prev, last) = (quarter(2), quarter(3));
    last <= prev && last <= 1e-6 * tol / n as f64
}

/// Geometric extrapolation of the weight beyond the scanned coefficients,
/// done separately for each parity so that parity-restricted states work.
fn beyond_estimate(coeffs: &[Complex64]) -> f64 {
    let n = coeffs.len();
    if n < 4 {
        return 0.0;
    }
    (1..=2)
        .map(|k| {
            let a = coeffs[n - k].norm_sqr();
            let b = coeffs[n - k - 2].norm_sqr();
            if a == 0.0 {
                0.0
            } else if b > a {
                let q = a / b;
                a * q / (1.0 - q)
            } else {
                a * n as f64
            }
        })
        .sum()
}

/// Keeps the shortest prefix whose dropped weight is at most `tol`.
pub(super) fn trim_and_wrap(mut coeffs: Vec<Complex64>, tol: f64) -> Result<FockExpansion> {
    // suffix = Σ_{k ≥ j} |c_k|² accumulated from the far end
    let mut suffix = beyond_estimate(&coeffs);
    let mut keep = coeffs.len();
    for j in (0..coeffs.len()).rev() {
        let with_j = suffix + coeffs[j].norm_sqr();
        if with_j > tol {
            keep = j + 1;
            break;
        }
        suffix = with_j;
        keep = j;
    }
    let keep = keep.max(1);
    if keep > MAX_TRUNCATION + 1 {
        let tail: f64 = coeffs[MAX_TRUNCATION + 1..].iter().map(|c| c.norm_sqr()).sum();
        return Err(Error::TruncationFailure { order: MAX_TRUNCATION, tail, tolerance: tol });
    }
    if suffix > tol {
        return Err(Error::TruncationFailure { order: keep - 1, tail: suffix, tolerance: tol });
    }
    coeffs.truncate(keep);
    FockExpansion::new(coeffs, suffix)
}

fn polar_from_log(log_mag: f64, phase: f64) -> Complex64 {
    Complex64::from_polar(log_mag.exp(), phase)
}

/// `e^{-|α|²/2} α^j / √j!`.
pub(super) fn coherent(alpha: Complex64, j: usize) -> Complex64 {
    let a2 = alpha.norm_sqr();
    if a2 == 0.0 {
        return if j == 0 { Complex64::new(1.0, 0.0) } else { ZERO };
    }
    let log_mag = -0.5 * a2 + j as f64 * alpha.norm().ln() - 0.5 * ln_factorial(j);
    polar_from_log(log_mag, j as f64 * alpha.arg())
}

/// Amplitude `⟨j| S(ξ) |n⟩` of the squeezed Fock state.
///
/// Log-domain form of the Král expansion with `μ = cosh r`,
/// `ν = e^{iδ} sinh r`, `τ = tanh r`:
///
/// ```text
/// C_j = √(j!/(n! μ)) e^{iδ(j−n)/2}
///       Σ_i C(n,i) μ^{−i} (τ/2)^{(j+n)/2 − i} (−1)^{(j−i)/2}
///           · [(j−i)!]^{-1} |H_{j−i}(0)| |H_{n−i}(0)|
/// ```
///
/// over `i ≤ min(n, j)` with `i ≡ n (mod 2)`; only `j ≡ n (mod 2)` survive.
/// With `n = 0` this reduces to the squeezed-vacuum amplitudes
/// `P_{2k} = (−1)^k √(2k)! e^{ikδ} τ^k / (2^k k! √μ)`.
pub(super) fn squeezed_fock(n: usize, sq: Squeezing, j: usize) -> Complex64 {
    if (j + n) % 2 == 1 {
        return ZERO;
    }
    let mu = sq.r.cosh();
    let tau = sq.r.tanh();
    let ln_mu = mu.ln();
    let ln_half_tau = (0.5 * tau).ln();
    let prefix = 0.5 * (ln_factorial(j) - ln_factorial(n) - ln_mu);

    let mut terms: Vec<(f64, f64)> = Vec::with_capacity(n / 2 + 1);
    let mut i = n % 2;
    while i <= n.min(j) {
        let power = (j + n) / 2 - i;
        let power_term = if power == 0 {
            0.0
        } else if tau == 0.0 {
            f64::NEG_INFINITY
        } else {
            power as f64 * ln_half_tau
        };
        if power_term.is_finite() {
            let l = (j - i) / 2;
            let (_, ln_hj) = hermite_at_zero_loglike(j - i);
            let (_, ln_hn) = hermite_at_zero_loglike(n - i);
            let log_mag = prefix + ln_binomial(n, i) - ln_factorial(j - i) - i as f64 * ln_mu
                + power_term
                + ln_hj
                + ln_hn;
            let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
            terms.push((log_mag, sign));
        }
        i += 2;
    }
    if terms.is_empty() {
        return ZERO;
    }
    let lmax = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|(l, s)| s * (l - lmax).exp()).sum();
    let phase = sq.delta * (j as f64 - n as f64) / 2.0;
    Complex64::from_polar(sum * lmax.exp(), phase)
}

/// `ln N²` for the photon-added coherent state, `N² = e^{-|α|²} / (m! L_m(−|α|²))`.
pub(super) fn photon_added_log_norm(alpha: Complex64, m: usize) -> Result<f64> {
    let a2 = alpha.norm_sqr();
    Ok(-a2 - ln_factorial(m) - laguerre(m, -a2)?.ln())
}

/// `N α^{j−m} √j! / (j−m)!` for `j ≥ m`.
pub(super) fn photon_added(alpha: Complex64, m: usize, log_norm_sq: f64, j: usize) -> Complex64 {
    if j < m {
        return ZERO;
    }
    let k = (j - m) as f64;
    let log_mag = 0.5 * log_norm_sq + k * alpha.norm().ln() + 0.5 * ln_factorial(j)
        - ln_factorial(j - m);
    polar_from_log(log_mag, k * alpha.arg())
}

/// `N_h [c_j(α) + (−1)^h c_j(−α)]` with `N_h = [2(1 + (−1)^h e^{−2|α|²})]^{−1/2}`.
pub(super) fn even_odd(alpha: Complex64, h: u8, j: usize) -> Complex64 {
    if j % 2 != h as usize {
        return ZERO;
    }
    let a2 = alpha.norm_sqr();
    if a2 == 0.0 {
        return if j == 0 { Complex64::new(1.0, 0.0) } else { ZERO };
    }
    let overlap = if h == 0 { 1.0 + (-2.0 * a2).exp() } else { -(-2.0 * a2).exp_m1() };
    // 2 N_h = 2 / √(2·overlap) with overlap = 1 ± e^{−2|α|²}
    let ln_two_nh = std::f64::consts::LN_2 - 0.5 * (2.0 * overlap).ln();
    let log_mag = ln_two_nh - 0.5 * a2 + j as f64 * alpha.norm().ln() - 0.5 * ln_factorial(j);
    polar_from_log(log_mag, j as f64 * alpha.arg())
}
