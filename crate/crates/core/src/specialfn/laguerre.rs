use super::MAX_ORDER;
use crate::error::{Error, Result};

/// Laguerre polynomial `L_m(x)` from `(k+1) L_{k+1} = (2k+1−x) L_k − k L_{k−1}`.
///
/// For `x ≤ 0` every term of the explicit series is non-negative, so the
/// recurrence is free of cancellation there and `L_m(x) ≥ 1`.
pub fn laguerre(m: usize, x: f64) -> Result<f64> {
    if m > MAX_ORDER {
        return Err(Error::OrderExceeded { order: m, max: MAX_ORDER });
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("laguerre needs finite x, got {x}")));
    }
    let mut prev = 1.0;
    if m == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 - x;
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
