use num_complex::Complex64;

use super::coefficients::{coherent, tail_settled, trim_and_wrap, TAIL_SCAN_LIMIT};
use super::FockExpansion;
use crate::error::Result;

/// Rows `0..=rows` of `D(α) Σ_k c_k |k⟩` with `D(α) = exp(α a† − α* a)`.
///
/// Columns of the displacement matrix follow from
/// `D(α)|k+1⟩ = (a† − α*) D(α)|k⟩ / √(k+1)`, starting at the coherent state
/// `D(α)|0⟩ = |α⟩`. Since `a†` only raises the index, rows up to `rows` are
/// exact without any larger working basis.
pub fn displace(coeffs: &[Complex64], alpha: Complex64, rows: usize) -> Vec<Complex64> {
    let mut column: Vec<Complex64> = (0..=rows).map(|m| coherent(alpha, m)).collect();
    let mut out: Vec<Complex64> = column.iter().map(|v| coeffs[0] * v).collect();
    let conj = alpha.conj();
    let mut next = vec![Complex64::new(0.0, 0.0); rows + 1];
    for (k, &ck) in coeffs.iter().enumerate().skip(1) {
        let norm = 1.0 / (k as f64).sqrt();
        next[0] = -conj * column[0] * norm;
        for m in 1..=rows {
            next[m] = ((m as f64).sqrt() * column[m - 1] - conj * column[m]) * norm;
        }
        std::mem::swap(&mut column, &mut next);
        if ck.norm_sqr() != 0.0 {
            for (o, v) in out.iter_mut().zip(&column) {
                *o += ck * v;
            }
        }
    }
    out
}

pub(super) fn expand_displaced(
    inner: &FockExpansion,
    alpha: Complex64,
    tol: f64,
) -> Result<FockExpansion> {
    let a = alpha.norm();
    let mut rows = (inner.truncation_order() + (a * a + 8.0 * a + 16.0).ceil() as usize).min(TAIL_SCAN_LIMIT);
    let out = loop {
        let out = displace(inner.coefficients(), alpha, rows);
        if tail_settled(&out, tol / 2.0) || rows == TAIL_SCAN_LIMIT {
            break out;
        }
        rows = (rows * 2).min(TAIL_SCAN_LIMIT);
    };
    let trimmed = trim_and_wrap(out, tol / 2.0)?;
    let tail = trimmed.tail_mass() + inner.tail_mass();
    FockExpansion::new(trimmed.coefficients().to_vec(), tail)
}
