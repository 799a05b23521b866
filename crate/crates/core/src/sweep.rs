//! Parameter sweeps along the standard state-family axes, with the
//! monotonicity, ordering and merging properties each curve must satisfy.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::area::{sigma_numeric_spec, AreaOptions};
use crate::checks::CheckOutcome;
use crate::error::{Error, Result};
use crate::quadrep::full;
use crate::states::{Squeezing, StateSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    /// Fock states against photon number.
    FockN,
    /// Squeezed Fock states against `r`, one curve per `n`.
    SqueezedR,
    /// Photon-added coherent states against `m`, one curve per integer
    /// `|α|²` (default 5).
    PacsM,
    /// Photon-added coherent states against `|α|²`, one curve per `m`.
    PacsIntensity,
    /// Even and odd coherent states against `|α|²`.
    CatIntensity,
}

impl Figure {
    pub const ALL: [Figure; 5] =
        [Figure::FockN, Figure::SqueezedR, Figure::PacsM, Figure::PacsIntensity, Figure::CatIntensity];

    pub fn name(self) -> &'static str {
        match self {
            Figure::FockN => "fock-n",
            Figure::SqueezedR => "squeezed-r",
            Figure::PacsM => "pacs-m",
            Figure::PacsIntensity => "pacs-intensity",
            Figure::CatIntensity => "cat-intensity",
        }
    }

    /// Default parameter range `(from, to, points)`.
    pub fn default_range(self) -> (f64, f64, usize) {
        match self {
            Figure::FockN => (0.0, 20.0, 21),
            Figure::SqueezedR => (0.0, 1.5, 31),
            Figure::PacsM => (1.0, 10.0, 10),
            Figure::PacsIntensity | Figure::CatIntensity => (0.25, 6.0, 24),
        }
    }

    /// Family parameter of each default curve.
    pub fn default_curves(self) -> Vec<usize> {
        match self {
            Figure::FockN => vec![0],
            Figure::PacsM => vec![5],
            Figure::SqueezedR => vec![0, 1, 5, 10],
            Figure::PacsIntensity => vec![1, 5, 10],
            Figure::CatIntensity => vec![0, 1],
        }
    }

    fn integer_axis(self) -> bool {
        matches!(self, Figure::FockN | Figure::PacsM)
    }

    fn curve_label(self, c: usize) -> String {
        match self {
            Figure::FockN => "fock".into(),
            Figure::SqueezedR => format!("n={c}"),
            Figure::PacsM => format!("|alpha|^2={c}"),
            Figure::PacsIntensity => format!("m={c}"),
            Figure::CatIntensity => if c == 0 { "even".into() } else { "odd".into() },
        }
    }

    fn spec(self, curve: usize, param: f64) -> StateSpec {
        let real = |a2: f64| Complex64::new(a2.sqrt(), 0.0);
        match self {
            Figure::FockN => StateSpec::Fock { n: param as usize },
            Figure::SqueezedR => StateSpec::SqueezedFock { n: curve, squeeze: Squeezing::new(param, 0.0) },
            Figure::PacsM => StateSpec::PhotonAddedCoherent { alpha: real(curve as f64), m: param as usize },
            Figure::PacsIntensity => StateSpec::PhotonAddedCoherent { alpha: real(param), m: curve },
            Figure::CatIntensity => StateSpec::EvenOddCoherent { alpha: real(param), h: curve as u8 },
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown figure `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub figure: Figure,
    /// `(from, to, points)`; `None` uses [`Figure::default_range`].
    pub range: Option<(f64, f64, usize)>,
    /// Family parameter per curve; `None` uses [`Figure::default_curves`].
    pub curves: Option<Vec<usize>>,
    pub options: AreaOptions,
}

impl SweepConfig {
    pub fn new(figure: Figure) -> Self {
        Self { figure, range: None, curves: None, options: AreaOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub curve: String,
    pub param: f64,
    pub spec: String,
    pub sigma: f64,
    pub nonclassical_area: f64,
    pub method: String,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub figure: Figure,
    pub range: (f64, f64, usize),
    pub curves: Vec<usize>,
    pub options: AreaOptions,
    pub rows: Vec<SweepRow>,
    pub checks: Vec<CheckOutcome>,
}

fn axis(figure: Figure, (from, to, points): (f64, f64, usize)) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && from <= to) || points == 0 {
        return Err(Error::InvalidParameter(format!("bad sweep range {from}..{to} with {points} points")));
    }
    if figure.integer_axis() {
        if from < 0.0 || from.fract() != 0.0 || to.fract() != 0.0 {
            return Err(Error::InvalidParameter("integer axis needs whole-number bounds".into()));
        }
        return Ok((from as usize..=to as usize).map(|v| v as f64).collect());
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let h = (to - from) / (points - 1) as f64;
    Ok((0..points).map(|k| if k + 1 == points { to } else { from + k as f64 * h }).collect())
}

/// Runs every (curve, parameter) point in parallel; rows come back in input
/// order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let range = cfg.range.unwrap_or_else(|| cfg.figure.default_range());
    let params = axis(cfg.figure, range)?;
    let curves = cfg.curves.clone().unwrap_or_else(|| cfg.figure.default_curves());
    if cfg.figure == Figure::CatIntensity && curves.iter().any(|&h| h > 1) {
        return Err(Error::InvalidParameter("cat curves are h = 0 or 1".into()));
    }
    if cfg.figure == Figure::FockN && curves != [0] {
        return Err(Error::InvalidParameter("the Fock sweep has a single curve".into()));
    }
    if curves.is_empty() || (1..curves.len()).any(|i| curves[..i].contains(&curves[i])) {
        return Err(Error::InvalidParameter("curves must be distinct and non-empty".into()));
    }
    let points: Vec<(usize, f64)> = curves.iter().flat_map(|&c| params.iter().map(move |&p| (c, p))).collect();
    let rows = points
        .par_iter()
        .map(|&(c, p)| {
            let spec = cfg.figure.spec(c, p);
            let r = sigma_numeric_spec(&spec, &cfg.options)?;
            Ok(SweepRow {
                curve: cfg.figure.curve_label(c),
                param: p,
                spec: spec.to_string(),
                sigma: r.sigma,
                nonclassical_area: r.nonclassical_area,
                method: r.method.as_str().to_string(),
                error: r.error_estimate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let checks = evaluate(cfg.figure, &curves, &rows);
    Ok(SweepReport { figure: cfg.figure, range, curves, options: cfg.options, rows, checks })
}

fn curve_rows<'a>(rows: &'a [SweepRow], label: &str) -> Vec<&'a SweepRow> {
    rows.iter().filter(|r| r.curve == label).collect()
}

/// Smallest step `sign·(a_{k+1} − a_k)` along a curve; positive means
/// strictly monotone in the requested direction.
fn min_step(rows: &[&SweepRow], sign: f64) -> f64 {
    rows.windows(2)
        .map(|w| sign * (w[1].nonclassical_area - w[0].nonclassical_area))
        .fold(f64::INFINITY, f64::min)
}

fn evaluate(figure: Figure, curves: &[usize], rows: &[SweepRow]) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let monotone = |out: &mut Vec<CheckOutcome>, label: String, sign: f64, what: &str| {
        let r = curve_rows(rows, &label);
        if r.len() >= 2 {
            let step = min_step(&r, sign);
            out.push(CheckOutcome::new(format!("{what} ({label})"), label.clone(), step, 0.0, step > 0.0));
        }
    };
    match figure {
        Figure::FockN => monotone(&mut out, figure.curve_label(0), 1.0, "area strictly increasing in n"),
        Figure::PacsM => {
            for &c in curves {
                monotone(&mut out, figure.curve_label(c), 1.0, "area strictly increasing in m");
            }
        }
        Figure::SqueezedR => {
            for &c in curves {
                monotone(&mut out, figure.curve_label(c), 1.0, "area strictly increasing in r");
            }
            let mut sorted = curves.to_vec();
            sorted.sort_unstable();
            for pair in sorted.windows(2) {
                let lo = curve_rows(rows, &figure.curve_label(pair[0]));
                let hi = curve_rows(rows, &figure.curve_label(pair[1]));
                let gap = lo
                    .iter()
                    .zip(&hi)
                    .map(|(a, b)| b.nonclassical_area - a.nonclassical_area)
                    .fold(f64::INFINITY, f64::min);
                out.push(CheckOutcome::new(
                    format!("curves ordered by n (n={} below n={})", pair[0], pair[1]),
                    "all r".into(),
                    gap,
                    0.0,
                    gap > 0.0,
                ));
            }
        }
        Figure::PacsIntensity => {
            for &c in curves {
                monotone(&mut out, figure.curve_label(c), -1.0, "area strictly decreasing in |alpha|^2");
            }
        }
        Figure::CatIntensity => {
            let even = curve_rows(rows, "even");
            let odd = curve_rows(rows, "odd");
            let gap = even
                .iter()
                .zip(&odd)
                .filter(|(e, _)| e.param >= 3.0)
                .map(|(e, o)| (e.nonclassical_area - o.nonclassical_area).abs() / e.nonclassical_area)
                .fold(0.0, f64::max);
            if even.iter().any(|e| e.param >= 3.0) && !odd.is_empty() {
                out.push(CheckOutcome::new(
                    "even/odd relative gap below 1% for |alpha|^2 >= 3".into(),
                    "|alpha|^2 >= 3".into(),
                    gap,
                    0.01,
                    gap < 0.01,
                ));
            }
        }
    }
    out
}

impl SweepReport {
    /// CSV with columns `curve,param,sigma,nonclassical_area,method,error`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["curve", "param", "sigma", "nonclassical_area", "method", "error"])?;
        for r in &self.rows {
            w.write_record([
                r.curve.clone(),
                full(r.param),
                full(r.sigma),
                full(r.nonclassical_area),
                r.method.clone(),
                full(r.error),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Run manifest: every tolerance and grid needed to reproduce the rows,
    /// plus the property checks.
    pub fn manifest(&self) -> serde_json::Value {
        serde_json::json!({
            "figure": self.figure,
            "range": { "from": self.range.0, "to": self.range.1, "points": self.range.2 },
            "curves": self.curves,
            "options": self.options,
            "rows": self.rows.len(),
            "checks": self.checks,
            "code_version": env!("CARGO_PKG_VERSION"),
        })
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_names_roundtrip() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert!("fig7".parse::<Figure>().is_err());
    }

    #[test]
    fn fock_sweep_rows() {
        let r = run_sweep(&SweepConfig::new(Figure::FockN)).unwrap();
        assert_eq!(r.rows.len(), 21);
        assert!(r.all_passed());
        assert_eq!(r.rows[2].spec, "fock:n=2");
    }

    #[test]
    fn short_cat_sweep() {
        let cfg = SweepConfig { range: Some((3.0, 4.0, 3)), ..SweepConfig::new(Figure::CatIntensity) };
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert!(r.all_passed(), "{:?}", r.checks);
    }

    #[test]
    fn pacs_m_curves_are_intensities() {
        let cfg = SweepConfig { range: Some((1.0, 3.0, 3)), curves: Some(vec![1, 5]), ..SweepConfig::new(Figure::PacsM) };
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert_eq!(r.rows[0].spec, StateSpec::PhotonAddedCoherent { alpha: Complex64::new(1.0, 0.0), m: 1 }.to_string());
        assert_eq!(r.checks.len(), 2);
        assert!(r.all_passed(), "{:?}", r.checks);
        let dup = SweepConfig { curves: Some(vec![5, 5]), ..cfg };
        assert!(run_sweep(&dup).is_err());
        assert!(run_sweep(&SweepConfig { curves: Some(vec![1]), ..SweepConfig::new(Figure::FockN) }).is_err());
    }

    #[test]
    fn bad_ranges() {
        assert!(axis(Figure::FockN, (0.5, 3.0, 4)).is_err());
        assert!(axis(Figure::SqueezedR, (1.0, 0.0, 4)).is_err());
        assert_eq!(axis(Figure::SqueezedR, (0.0, 1.0, 3)).unwrap(), vec![0.0, 0.5, 1.0]);
    }
}
