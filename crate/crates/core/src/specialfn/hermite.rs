use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ln_factorial, MAX_ORDER};
use crate::error::{Error, Result};

const RESCALE: f64 = 1e150;
const LN_RESCALE: f64 = 345.387_763_949_107; // ln(1e150)
const LN_UNDERFLOW: f64 = -700.0;

/// Normalized Hermite functions `ψ_0(x) ..= ψ_{n_max}(x)` written into `out`.
///
/// `ψ_n(x) = e^{-x²/2} H_n(x) / (π^{1/4} 2^{n/2} √n!)`, generated by the
/// normalized three-term recurrence
/// `ψ_{n+1} = x √(2/(n+1)) ψ_n − √(n/(n+1)) ψ_{n−1}`.
/// The Gaussian factor is carried as a separate log scale so the recurrence
/// neither underflows for large `|x|` nor overflows for large `n`.
pub fn hermite_functions(n_max: usize, x: f64, out: &mut Vec<f64>) -> Result<()> {
    if n_max > MAX_ORDER {
        return Err(Error::OrderExceeded { order: n_max, max: MAX_ORDER });
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("hermite_function needs finite x, got {x}")));
    }
    out.clear();
    out.reserve(n_max + 1);

    let mut log_scale = -0.5 * x * x - 0.25 * PI.ln();
    let mut scale = scale_factor(log_scale);
    let mut prev = 0.0_f64;
    let mut cur = 1.0_f64;
    out.push(materialize(cur, log_scale, scale));

    for k in 0..n_max {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += LN_RESCALE;
            scale = scale_factor(log_scale);
        }
        out.push(materialize(cur, log_scale, scale));
    }
    Ok(())
}

#[inline]
fn scale_factor(log_scale: f64) -> Option<f64> {
    (log_scale > LN_UNDERFLOW).then(|| log_scale.exp())
}

#[inline]
fn materialize(mantissa: f64, log_scale: f64, scale: Option<f64>) -> f64 {
    match scale {
        Some(s) => mantissa * s,
        None if mantissa == 0.0 => 0.0,
        None => mantissa.signum() * (mantissa.abs().ln() + log_scale).exp(),
    }
}

/// `Σ_j w_j ψ_j(x)` for complex weights, fused with the scaled recurrence so
/// no intermediate buffer is needed. `weights.len() − 1` must not exceed
/// [`MAX_ORDER`] and `x` must be finite; callers check both.
pub fn hermite_series(weights: &[Complex64], x: f64) -> Complex64 {
    debug_assert!(weights.len() <= MAX_ORDER + 1 && x.is_finite());
    let Some((&w0, rest)) = weights.split_first() else {
        return Complex64::new(0.0, 0.0);
    };
    let mut log_scale = -0.5 * x * x - 0.25 * PI.ln();
    let mut prev = 0.0_f64;
    let mut cur = 1.0_f64;
    let mut acc = w0 * cur;
    for (k, &w) in rest.iter().enumerate() {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            acc /= RESCALE;
            log_scale += LN_RESCALE;
        }
        acc += w * cur;
    }
    if log_scale > LN_UNDERFLOW {
        return acc * log_scale.exp();
    }
    let mag = acc.norm();
    if mag == 0.0 {
        return acc;
    }
    acc / mag * (mag.ln() + log_scale).exp()
}

/// Single normalized Hermite function `ψ_n(x)`.
pub fn hermite_function(n: usize, x: f64) -> Result<f64> {
    let mut buf = Vec::new();
    hermite_functions(n, x, &mut buf)?;
    Ok(buf[n])
}

/// `H_n(0)` in sign / log-magnitude form.
///
/// Odd orders vanish and return `(0, -inf)`. For `n = 2k` the value is
/// `(-1)^k (2k)!/k!`.
pub fn hermite_at_zero_loglike(n: usize) -> (i8, f64) {
    if n % 2 == 1 {
        return (0, f64::NEG_INFINITY);
    }
    let k = n / 2;
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    (sign, ln_factorial(n) - ln_factorial(k))
}
