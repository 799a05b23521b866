//! Simulated balanced-homodyne data and an estimator of `σ` that works from
//! the samples alone.

mod io;
mod table;

pub use io::{manifest_path, parse_records, Manifest};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{ProfileMethod, QuadratureProfile};
use crate::area::{AreaMethod, AreaResult};
use crate::error::{Error, Result};
use crate::quadrep::{auto_window, uniform, PhaseSlice, EXPORT_GRID_TOLERANCE};
use crate::states::FockExpansion;
use crate::theta_rule;
use table::InverseCdf;

/// Recorded in every dataset so that a file identifies the exact stream.
pub const GENERATOR: &str =
    "ChaCha20 (rand_chacha 0.3, seed_from_u64(seed), stream = angle index); inverse CDF on a 4001-point table, PCHIP interpolation";
pub const DEFAULT_TABLE_POINTS: usize = 4001;
/// Fewer samples per angle make the standard-error formula meaningless.
pub const MIN_SAMPLES_PER_ANGLE: usize = 30;

/// Quadrature samples `(θ, x)` with their provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomodyneDataset {
    pub records: Vec<(f64, f64)>,
    pub spec_label: String,
    pub seed: u64,
    pub angles: Vec<f64>,
    pub samples_per_angle: usize,
    pub generator: String,
}

#[derive(Debug, Clone, Copy)]
pub struct SamplerOptions {
    pub table_points: usize,
    /// Allowed `|1 − mass|` of the tabulated density on the window.
    pub grid_tolerance: f64,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        Self { table_points: DEFAULT_TABLE_POINTS, grid_tolerance: EXPORT_GRID_TOLERANCE }
    }
}

/// Inverse-CDF tables for one state at a fixed set of angles. Building the
/// tables dominates small runs, so one sampler can serve many seeds.
#[derive(Debug, Clone)]
pub struct Sampler {
    angles: Vec<f64>,
    tables: Vec<InverseCdf>,
}

impl Sampler {
    pub fn new(exp: &FockExpansion, angles: &[f64], opts: SamplerOptions) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidParameter("need at least one angle".into()));
        }
        if angles.iter().any(|a| !(a.is_finite() && (0.0..=std::f64::consts::TAU).contains(a))) {
            return Err(Error::InvalidParameter("angles must lie in [0, 2π]".into()));
        }
        if opts.table_points < 3 {
            return Err(Error::InvalidParameter("table needs at least 3 points".into()));
        }
        let (lo, hi) = auto_window(exp);
        let xs = uniform(lo, hi, opts.table_points);
        let tables = angles
            .par_iter()
            .enumerate()
            .map(|(row, &theta)| {
                let slice = PhaseSlice::new(exp, theta)?;
                let nodes: Vec<f64> = xs.iter().map(|&x| slice.density(x)).collect();
                let mids: Vec<f64> = xs.windows(2).map(|w| slice.density(0.5 * (w[0] + w[1]))).collect();
                let (table, deficit) = InverseCdf::from_density(&xs, &nodes, &mids)?;
                if deficit > opts.grid_tolerance {
                    return Err(Error::WindowTooSmall { row, deficit, tolerance: opts.grid_tolerance });
                }
                Ok(table)
            })
            .collect::<Result<_>>()?;
        Ok(Self { angles: angles.to_vec(), tables })
    }

    /// Draws `samples_per_angle` values at every angle. Angle `k` uses
    /// stream `k` of the seeded generator, so angles are independent and
    /// the output does not depend on thread scheduling.
    pub fn sample(&self, samples_per_angle: usize, seed: u64, spec_label: &str) -> Result<HomodyneDataset> {
        if samples_per_angle < 2 {
            return Err(Error::InvalidParameter("need at least 2 samples per angle".into()));
        }
        let per_angle: Vec<Vec<f64>> = self
            .tables
            .par_iter()
            .enumerate()
            .map(|(k, table)| {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                rng.set_stream(k as u64);
                (0..samples_per_angle).map(|_| table.quantile(rng.gen::<f64>())).collect()
            })
            .collect();
        let records = self
            .angles
            .iter()
            .zip(per_angle)
            .flat_map(|(&t, xs)| xs.into_iter().map(move |x| (t, x)))
            .collect();
        Ok(HomodyneDataset {
            records,
            spec_label: spec_label.to_string(),
            seed,
            angles: self.angles.clone(),
            samples_per_angle,
            generator: GENERATOR.to_string(),
        })
    }
}

/// Samples `ω(·, θ)` at each angle.
pub fn sample(
    exp: &FockExpansion,
    angles: &[f64],
    samples_per_angle: usize,
    seed: u64,
    spec_label: &str,
) -> Result<HomodyneDataset> {
    Sampler::new(exp, angles, SamplerOptions::default())?.sample(samples_per_angle, seed, spec_label)
}

/// `n` uniform angles on `[0, π)`. Enough for `σ` because `ΔX_θ` is
/// π-periodic.
pub fn half_turn_angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 * std::f64::consts::PI / n as f64).collect()
}

impl HomodyneDataset {
    /// Checks the dataset invariants and returns, for each angle in ascending
    /// order, the angle and its samples.
    fn grouped(&self) -> Result<Vec<(f64, Vec<f64>)>> {
        let n = self.samples_per_angle;
        if self.angles.len() < 2 {
            return Err(Error::InsufficientData(format!("need at least 2 angles, got {}", self.angles.len())));
        }
        if n < MIN_SAMPLES_PER_ANGLE {
            return Err(Error::InsufficientData(format!(
                "need at least {MIN_SAMPLES_PER_ANGLE} samples per angle, got {n}"
            )));
        }
        let mut order: Vec<usize> = (0..self.angles.len()).collect();
        order.sort_by(|&a, &b| self.angles[a].total_cmp(&self.angles[b]));
        let sorted: Vec<f64> = order.iter().map(|&i| self.angles[i]).collect();
        if sorted.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InsufficientData("angles must be distinct".into()));
        }
        let mut groups: Vec<(f64, Vec<f64>)> = sorted.iter().map(|&t| (t, Vec::with_capacity(n))).collect();
        for &(t, x) in &self.records {
            let k = sorted.partition_point(|&a| a < t);
            let nearest = [k.wrapping_sub(1), k]
                .into_iter()
                .filter(|&i| i < sorted.len())
                .min_by(|&i, &j| (sorted[i] - t).abs().total_cmp(&(sorted[j] - t).abs()));
            match nearest {
                Some(i) if (sorted[i] - t).abs() <= 1e-9 => groups[i].1.push(x),
                _ => return Err(Error::InsufficientData(format!("record angle {t} is not a dataset angle"))),
            }
        }
        for (t, xs) in &groups {
            if xs.len() != n {
                return Err(Error::InsufficientData(format!(
                    "angle {t}: {} samples, expected {n}",
                    xs.len()
                )));
            }
        }
        Ok(groups)
    }

    /// Empirical per-angle mean and Bessel-corrected standard deviation.
    pub fn empirical_profile(&self) -> Result<QuadratureProfile> {
        let groups = self.grouped()?;
        let mut profile = QuadratureProfile {
            theta_values: Vec::with_capacity(groups.len()),
            mean: Vec::with_capacity(groups.len()),
            std: Vec::with_capacity(groups.len()),
            method: ProfileMethod::Sampled,
        };
        for (t, xs) in &groups {
            let (mean, var) = mean_variance(xs);
            profile.theta_values.push(*t);
            profile.mean.push(mean);
            profile.std.push(var.sqrt());
        }
        Ok(profile)
    }
}

/// Welford's update, in record order.
fn mean_variance(xs: &[f64]) -> (f64, f64) {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (k, &x) in xs.iter().enumerate() {
        let d = x - mean;
        mean += d / (k + 1) as f64;
        m2 += d * (x - mean);
    }
    (mean, m2 / (xs.len() - 1) as f64)
}

/// Estimates `σ` from homodyne samples.
///
/// `ΔX_θ` at each angle is the Bessel-corrected sample standard deviation
/// `s`, with normal-theory standard error `s/√(2(N−1))`. The angles are
/// combined by the rule `theta_rule::detect` picks (periodic trapezoid for
/// uniform grids). The error estimate adds the propagated statistical error
/// to the rule's discretization error on the fitted exact profile shape.
pub fn estimate_area(data: &HomodyneDataset) -> Result<AreaResult> {
    let profile = data.empirical_profile()?;
    let rule = theta_rule::detect(&profile.theta_values)?;
    let n = data.samples_per_angle as f64;
    let sigma: f64 = rule.weights.iter().zip(&profile.std).map(|(w, s)| w * s).sum();
    let stat = rule
        .weights
        .iter()
        .zip(&profile.std)
        .map(|(w, s)| (w * s / (2.0 * (n - 1.0)).sqrt()).powi(2))
        .sum::<f64>()
        .sqrt();
    let variances: Vec<f64> = profile.std.iter().map(|s| s * s).collect();
    let disc = theta_rule::discretization_error(&profile.theta_values, &rule, &variances);
    let integration = format!(
        "{}; error = statistical {stat:.3e} + discretization {disc:.3e}",
        rule.description
    );
    Ok(AreaResult::new(sigma, AreaMethod::Sampled, stat + disc, integration))
}
