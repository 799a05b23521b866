//! Inverse-CDF table with monotone cubic (Fritsch–Carlson / PCHIP)
//! interpolation.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(super) struct InverseCdf {
    u: Vec<f64>,
    x: Vec<f64>,
    slope: Vec<f64>,
}

impl InverseCdf {
    /// Builds the table from a density sampled on a uniform grid `xs`
    /// together with its values at the cell midpoints. Cell masses come from
    /// Simpson's rule; the returned deficit is `|1 − total mass|`.
    pub fn from_density(xs: &[f64], nodes: &[f64], mids: &[f64]) -> Result<(Self, f64)> {
        debug_assert_eq!(nodes.len(), xs.len());
        debug_assert_eq!(mids.len() + 1, xs.len());
        let mut cdf = Vec::with_capacity(xs.len());
        cdf.push(0.0);
        let mut acc = 0.0;
        for k in 0..mids.len() {
            let h = xs[k + 1] - xs[k];
            acc += h / 6.0 * (nodes[k] + 4.0 * mids[k] + nodes[k + 1]);
            cdf.push(acc);
        }
        if !(acc.is_finite() && acc > 0.0) {
            return Err(Error::InvalidParameter("density has no mass on the sampling window".into()));
        }
        let deficit = (1.0 - acc).abs();

        // Keep strictly increasing knots, starting from the last point of a
        // flat left tail so that u = 0 maps to the edge of the support.
        let mut u = Vec::with_capacity(xs.len());
        let mut x = Vec::with_capacity(xs.len());
        let start = cdf.iter().rposition(|&c| c == 0.0).unwrap_or(0);
        for k in start..xs.len() {
            let v = cdf[k] / acc;
            if u.last().is_none_or(|&last| v > last) {
                u.push(v);
                x.push(xs[k]);
            }
        }
        if u.len() < 2 {
            return Err(Error::InvalidParameter("density too concentrated for the sampling grid".into()));
        }
        let n = u.len() - 1;
        u[n] = 1.0;
        let slope = pchip_slopes(&u, &x);
        Ok((Self { u, x, slope }, deficit))
    }

    /// Inverse CDF at `v ∈ [0, 1]`.
    pub fn quantile(&self, v: f64) -> f64 {
        let n = self.u.len();
        let k = self.u.partition_point(|&u| u <= v).clamp(1, n - 1) - 1;
        let h = self.u[k + 1] - self.u[k];
        let t = ((v - self.u[k]) / h).clamp(0.0, 1.0);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.x[k] + h10 * h * self.slope[k] + h01 * self.x[k + 1] + h11 * h * self.slope[k + 1]
    }
}

/// Derivatives that keep the Hermite interpolant monotone: weighted harmonic
/// means of adjacent secants inside, one-sided secants at the ends.
fn pchip_slopes(u: &[f64], x: &[f64]) -> Vec<f64> {
    let n = u.len();
    let h: Vec<f64> = u.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (x[k + 1] - x[k]) / h[k]).collect();
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for k in 1..n - 1 {
        if d[k - 1] <= 0.0 || d[k] <= 0.0 {
            m[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    m
}
