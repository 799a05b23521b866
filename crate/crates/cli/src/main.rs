//! `tomoarea` command-line front end.
//!
//! Exit codes: 0 success, 1 an invariant check failed, 2 bad usage, input
//! or data, 3 a numerical routine did not converge or two independent
//! routes to the same value disagree.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tomoarea::analysis::{std_profile_with, ProfileMethod, TomographicOptions};
use tomoarea::checks::{run_checks, CheckConfig, Family};
use tomoarea::homodyne::{estimate_area, half_turn_angles, HomodyneDataset, Sampler, SamplerOptions};
use tomoarea::quadrep::{tomogram_grid, DEFAULT_X_POINTS, EXPORT_GRID_TOLERANCE};
use tomoarea::area::AREA_TAIL_TOLERANCE;
use tomoarea::states::DEFAULT_TAIL_TOLERANCE;
use tomoarea::sweep::{run_sweep, Figure, SweepConfig};
use tomoarea::{expand, sigma_analytic, sigma_numeric, AreaOptions, AreaResult, Error, StateSpec};

/// Numeric and analytic σ must agree to this fraction of σ.
const AGREEMENT: f64 = 1e-7;
const OUT_DIR_ENV: &str = "TOMOAREA_OUT_DIR";

#[derive(Parser)]
#[command(name = "tomoarea", version, about = "Homodyne-tomographic nonclassical area of pure single-mode states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// σ and σ − √2π, numerically and in closed form where one exists.
    Area(AreaArgs),
    /// Mean and spread of X_θ on a θ grid over [0, π].
    Profile(ProfileArgs),
    /// Optical tomogram ω(x, θ) on a rectangular grid.
    Tomogram(TomogramArgs),
    /// Nonclassical area along one parameter axis.
    Sweep(SweepArgs),
    /// Simulated homodyne samples written as CSV plus a manifest.
    Sample(SampleArgs),
    /// σ estimated from a homodyne dataset.
    Estimate(EstimateArgs),
    /// Randomized invariant suite across state families.
    Check(CheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Profile {
    Analytic,
    Tomographic,
}

impl From<Profile> for ProfileMethod {
    fn from(p: Profile) -> Self {
        match p {
            Profile::Analytic => ProfileMethod::Analytic,
            Profile::Tomographic => ProfileMethod::Tomographic,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file. Without it, output goes to stdout unless
    /// TOMOAREA_OUT_DIR names a directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = OUT_DIR_ENV, hide_env_values = true)]
    out_dir: Option<PathBuf>,
}

impl Output {
    /// Explicit `--out`, else `<out-dir>/<default_name>.<ext>`, else stdout.
    fn target(&self, default_name: &str) -> Option<PathBuf> {
        let ext = match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        self.out.clone().or_else(|| self.out_dir.as_ref().map(|d| d.join(format!("{default_name}.{ext}"))))
    }

    fn write(&self, default_name: &str, body: impl FnOnce(&mut dyn Write) -> tomoarea::Result<()>) -> tomoarea::Result<()> {
        match self.target(default_name) {
            Some(path) => {
                let mut w = BufWriter::new(File::create(&path)?);
                body(&mut w)?;
                w.flush()?;
                eprintln!("wrote {}", path.display());
                Ok(())
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                body(&mut w)?;
                w.flush()?;
                Ok(())
            }
        }
    }
}

fn write_json(w: &mut dyn Write, v: &serde_json::Value) -> tomoarea::Result<()> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)?;
    Ok(())
}

#[derive(Args)]
struct AreaArgs {
    #[arg(long)]
    state: StateSpec,
    /// Relative target of the θ-quadrature.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Fock truncation tail mass.
    #[arg(long, default_value_t = AREA_TAIL_TOLERANCE)]
    tail: f64,
    #[arg(long, value_enum, default_value = "analytic")]
    profile: Profile,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    state: StateSpec,
    /// Grid points on [0, π], both ends included.
    #[arg(long, default_value_t = 181)]
    theta_points: usize,
    #[arg(long, value_enum, default_value = "analytic")]
    method: Profile,
    /// Convergence target of the tomographic moment integrals.
    #[arg(long, default_value_t = 1e-11)]
    tolerance: f64,
    #[arg(long, default_value_t = DEFAULT_TAIL_TOLERANCE)]
    tail: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct TomogramArgs {
    #[arg(long)]
    state: StateSpec,
    /// Uniform angles on [0, π].
    #[arg(long, default_value_t = 33)]
    theta_points: usize,
    #[arg(long, default_value_t = DEFAULT_X_POINTS)]
    x_points: usize,
    /// x window as `lo,hi`; chosen from the state's moments when omitted.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(f64, f64)>,
    /// Allowed |1 − ∫ω dx| per row on the grid.
    #[arg(long, default_value_t = EXPORT_GRID_TOLERANCE)]
    tolerance: f64,
    #[arg(long, default_value_t = DEFAULT_TAIL_TOLERANCE)]
    tail: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepArgs {
    /// fock-n, squeezed-r, pacs-m, pacs-intensity or cat-intensity.
    #[arg(long)]
    figure: Figure,
    #[arg(long, requires = "to")]
    from: Option<f64>,
    #[arg(long, requires = "from")]
    to: Option<f64>,
    /// Points on a continuous axis; integer axes take every whole value.
    #[arg(long)]
    points: Option<usize>,
    /// Curve parameters, comma separated: n for squeezed-r, |α|² for pacs-m,
    /// m for pacs-intensity, h for cat-intensity.
    #[arg(long, value_delimiter = ',')]
    curves: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, default_value_t = AREA_TAIL_TOLERANCE)]
    tail: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    state: StateSpec,
    /// Uniform angles on [0, π).
    #[arg(long, default_value_t = 32)]
    theta_points: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Points of the inverse-CDF table.
    #[arg(long, default_value_t = tomoarea::homodyne::DEFAULT_TABLE_POINTS)]
    x_points: usize,
    /// Allowed missing probability mass of each table.
    #[arg(long, default_value_t = EXPORT_GRID_TOLERANCE)]
    tolerance: f64,
    #[arg(long, default_value_t = DEFAULT_TAIL_TOLERANCE)]
    tail: f64,
    /// Dataset CSV; the manifest goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = OUT_DIR_ENV, hide_env_values = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// `theta,x` CSV.
    #[arg(long)]
    input: PathBuf,
    /// Manifest path; defaults to the sidecar next to the input if present.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CheckArgs {
    /// Families to test, comma separated.
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<Family>>,
    /// Random cases per family.
    #[arg(long, default_value_t = 10)]
    cases: usize,
    #[arg(long, default_value_t = CheckConfig::default().seed)]
    seed: u64,
    /// Scale the largest coefficient of every state by this factor.
    #[arg(long)]
    perturb: Option<f64>,
    #[command(flatten)]
    output: Output,
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("window must be `lo,hi`")?;
    let lo: f64 = a.trim().parse().map_err(|_| format!("bad window bound `{a}`"))?;
    let hi: f64 = b.trim().parse().map_err(|_| format!("bad window bound `{b}`"))?;
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok((lo, hi))
    } else {
        Err("window needs finite lo < hi".into())
    }
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Nonconvergence { .. }
            | Error::NegativeVariance(_)
            | Error::TruncationFailure { .. }
            | Error::WindowTooSmall { .. }
            | Error::OrderExceeded { .. } => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn positive(name: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(fail(2, format!("--{name} must be a positive number, got {v}")))
    }
}

fn at_least(name: &str, v: usize, min: usize) -> Result<(), Failure> {
    if v >= min {
        Ok(())
    } else {
        Err(fail(2, format!("--{name} must be at least {min}, got {v}")))
    }
}

fn result_json(r: &AreaResult) -> serde_json::Value {
    json!({
        "sigma": r.sigma,
        "nonclassical_area": r.nonclassical_area,
        "method": r.method,
        "error_estimate": r.error_estimate,
        "integration": r.integration,
    })
}

fn write_results_csv(w: &mut dyn Write, spec: &str, results: &[&AreaResult]) -> tomoarea::Result<()> {
    writeln!(w, "spec,method,sigma,nonclassical_area,error_estimate")?;
    for r in results {
        writeln!(
            w,
            "\"{spec}\",{},{:.16e},{:.16e},{:.16e}",
            r.method.as_str(),
            r.sigma,
            r.nonclassical_area,
            r.error_estimate
        )?;
    }
    Ok(())
}

fn cmd_area(a: AreaArgs) -> Result<(), Failure> {
    positive("tolerance", a.tolerance)?;
    positive("tail", a.tail)?;
    let opts = AreaOptions { tail_tolerance: a.tail, tolerance: a.tolerance, profile: a.profile.into(), ..AreaOptions::default() };
    let spec = a.state.to_string();
    let exp = expand(&a.state, a.tail)?;
    let numeric = sigma_numeric(&exp, &opts)?;
    let analytic = match sigma_analytic(&a.state) {
        Ok(r) => Some(r),
        Err(Error::NoClosedForm(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let delta = analytic.as_ref().map(|r| numeric.sigma - r.sigma);
    a.output.write("area", |w| match a.output.format {
        Format::Json => write_json(
            w,
            &json!({
                "spec": spec,
                "truncation_order": exp.truncation_order(),
                "tail_mass": exp.tail_mass(),
                "numeric": result_json(&numeric),
                "analytic": analytic.as_ref().map(result_json),
                "delta": delta,
            }),
        ),
        Format::Csv => {
            let mut rows = vec![&numeric];
            rows.extend(analytic.as_ref());
            write_results_csv(w, &spec, &rows)
        }
    })?;
    match delta {
        Some(d) if d.abs() > AGREEMENT * numeric.sigma => {
            Err(fail(3, format!("numeric and analytic σ differ by {d:.3e}")))
        }
        _ => Ok(()),
    }
}

fn cmd_profile(a: ProfileArgs) -> Result<(), Failure> {
    at_least("theta-points", a.theta_points, 2)?;
    positive("tolerance", a.tolerance)?;
    positive("tail", a.tail)?;
    let exp = expand(&a.state, a.tail)?;
    let n = a.theta_points;
    let grid: Vec<f64> = (0..n).map(|k| k as f64 * std::f64::consts::PI / (n - 1) as f64).collect();
    let opts = TomographicOptions { tolerance: a.tolerance, ..TomographicOptions::default() };
    let profile = std_profile_with(&exp, &grid, a.method.into(), &opts)?;
    let spec = a.state.to_string();
    a.output.write("profile", |w| match a.output.format {
        Format::Json => write_json(w, &profile.to_json(&spec)),
        Format::Csv => profile.write_csv(w),
    })?;
    Ok(())
}

fn cmd_tomogram(a: TomogramArgs) -> Result<(), Failure> {
    at_least("theta-points", a.theta_points, 1)?;
    at_least("x-points", a.x_points, 3)?;
    positive("tolerance", a.tolerance)?;
    positive("tail", a.tail)?;
    let exp = expand(&a.state, a.tail)?;
    let n = a.theta_points;
    let grid: Vec<f64> = if n == 1 {
        vec![0.0]
    } else {
        (0..n).map(|k| k as f64 * std::f64::consts::PI / (n - 1) as f64).collect()
    };
    let tomo = tomogram_grid(&exp, &grid, a.window, a.x_points, a.tolerance)?;
    let spec = a.state.to_string();
    a.output.write("tomogram", |w| match a.output.format {
        Format::Json => write_json(w, &tomo.to_json(&spec, exp.truncation_order())),
        Format::Csv => tomo.write_csv(w),
    })?;
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Failure> {
    positive("tolerance", a.tolerance)?;
    positive("tail", a.tail)?;
    let (from, to, points) = a.figure.default_range();
    let range = match (a.from, a.to) {
        (Some(f), Some(t)) => Some((f, t, a.points.unwrap_or(points))),
        _ => a.points.map(|p| (from, to, p)),
    };
    let cfg = SweepConfig {
        figure: a.figure,
        range,
        curves: a.curves,
        options: AreaOptions { tail_tolerance: a.tail, tolerance: a.tolerance, ..AreaOptions::default() },
    };
    let report = run_sweep(&cfg)?;
    let name = a.figure.name();
    match a.output.format {
        Format::Csv => {
            a.output.write(name, |w| report.write_csv(w))?;
            if let Some(path) = a.output.target(name) {
                let mpath = sidecar(&path);
                std::fs::write(&mpath, serde_json::to_string_pretty(&report.manifest()).map_err(Error::from)? + "\n")
                    .map_err(Error::from)?;
                eprintln!("wrote {}", mpath.display());
            }
        }
        Format::Json => {
            let mut doc = report.manifest();
            doc["rows"] = serde_json::to_value(&report.rows).map_err(Error::from)?;
            a.output.write(name, |w| write_json(w, &doc))?;
        }
    }
    for c in &report.checks {
        eprintln!("{c}");
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(fail(1, "sweep property checks failed"))
    }
}

fn sidecar(path: &Path) -> PathBuf {
    tomoarea::homodyne::manifest_path(path)
}

fn cmd_sample(a: SampleArgs) -> Result<(), Failure> {
    at_least("theta-points", a.theta_points, 1)?;
    at_least("samples", a.samples, 2)?;
    at_least("x-points", a.x_points, 3)?;
    positive("tolerance", a.tolerance)?;
    positive("tail", a.tail)?;
    let path = a
        .out
        .or_else(|| a.out_dir.map(|d| d.join(format!("sample-seed{}.csv", a.seed))))
        .ok_or_else(|| fail(2, format!("sample needs --out or {OUT_DIR_ENV}")))?;
    let exp = expand(&a.state, a.tail)?;
    let opts = SamplerOptions { table_points: a.x_points, grid_tolerance: a.tolerance };
    let data = Sampler::new(&exp, &half_turn_angles(a.theta_points), opts)?.sample(a.samples, a.seed, &a.state.to_string())?;
    let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).ok();
    let mpath = data.save(&path, created)?;
    eprintln!("wrote {} ({} records) and {}", path.display(), data.records.len(), mpath.display());
    Ok(())
}

fn cmd_estimate(a: EstimateArgs) -> Result<(), Failure> {
    let data = HomodyneDataset::load(&a.input, a.manifest.as_deref())?;
    let r = estimate_area(&data)?;
    a.output.write("estimate", |w| match a.output.format {
        Format::Json => {
            let mut doc = result_json(&r);
            doc["spec"] = json!(data.spec_label);
            doc["angles"] = json!(data.angles.len());
            doc["samples_per_angle"] = json!(data.samples_per_angle);
            write_json(w, &doc)
        }
        Format::Csv => write_results_csv(w, &data.spec_label, &[&r]),
    })?;
    Ok(())
}

fn cmd_check(a: CheckArgs) -> Result<(), Failure> {
    at_least("cases", a.cases, 1)?;
    if let Some(p) = a.perturb {
        positive("perturb", p)?;
    }
    let cfg = CheckConfig {
        families: a.families.unwrap_or_else(|| Family::ALL.to_vec()),
        cases_per_family: a.cases,
        seed: a.seed,
        perturbation: a.perturb,
    };
    let report = run_checks(&cfg)?;
    a.output.write("check", |w| match a.output.format {
        Format::Json => write_json(w, &serde_json::to_value(&report)?),
        Format::Csv => {
            writeln!(w, "invariant,case,measured,threshold,passed")?;
            for o in &report.outcomes {
                writeln!(
                    w,
                    "\"{}\",\"{}\",{:.16e},{:.16e},{}",
                    o.invariant.replace('"', "\"\""),
                    o.case,
                    o.measured,
                    o.threshold,
                    o.passed
                )?;
            }
            Ok(())
        }
    })?;
    let failures: Vec<_> = report.failures().collect();
    if failures.is_empty() {
        eprintln!("{} outcomes over {} cases, all passed", report.outcomes.len(), report.cases);
        Ok(())
    } else {
        for f in &failures {
            eprintln!("{f}");
        }
        Err(fail(1, format!("{} of {} invariant checks failed", failures.len(), report.outcomes.len())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Area(a) => cmd_area(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Tomogram(a) => cmd_tomogram(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Check(a) => cmd_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
