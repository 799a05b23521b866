//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use tomoarea::area::{product_relation_check, sigma_fock};
use tomoarea::checks::{run_checks, CheckConfig};
use tomoarea::homodyne::{estimate_area, half_turn_angles, Sampler, SamplerOptions};
use tomoarea::{expand, sigma_analytic, sigma_numeric, AreaOptions, Complex64, Squeezing, StateSpec, CLASSICAL_SIGMA};

/// Truncation tail used by every σ computation below. The widest state,
/// squeezed Fock n = 10 at r = 1.5, needs order ~1000 at this level.
const TIGHT_TAIL: f64 = 1e-14;

const R_GRID: [f64; 4] = [0.1, 0.5, 1.0, 1.5];
const DELTA_GRID: [f64; 4] = [0.0, PI / 3.0, PI, 3.0 * PI / 2.0];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn opts(tail: f64) -> AreaOptions {
    AreaOptions { tail_tolerance: tail, ..AreaOptions::default() }
}

fn sigma(spec: &StateSpec, tail: f64) -> tomoarea::Result<f64> {
    Ok(sigma_numeric(&expand(spec, tail)?, &opts(tail))?.sigma)
}

fn area(spec: &StateSpec, tail: f64) -> tomoarea::Result<f64> {
    Ok(sigma(spec, tail)? - CLASSICAL_SIGMA)
}

fn classical_floor() -> tomoarea::Result<Outcome> {
    let alphas = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(2.5, 0.0),
        Complex64::new(1.0, 2.0),
        Complex64::from_polar(5.0, PI / 3.0),
    ];
    let mut worst = 0.0_f64;
    for alpha in alphas {
        worst = worst.max((sigma(&StateSpec::Coherent { alpha }, TIGHT_TAIL)? - CLASSICAL_SIGMA).abs());
    }
    Ok(outcome(worst <= 1e-8, format!("max |σ − √2π| = {worst:.2e} over 5 amplitudes (tol 1e-8)")))
}

fn fock_exactness() -> tomoarea::Result<Outcome> {
    let mut worst = 0.0_f64;
    for n in 0..=30 {
        worst = worst.max((sigma(&StateSpec::Fock { n }, TIGHT_TAIL)? - sigma_fock(n)).abs());
    }
    Ok(outcome(worst <= 1e-8, format!("max |σ − √(2(2n+1))π| = {worst:.2e} for n = 0..30 (tol 1e-8)")))
}

fn squeezed_specs(r: f64, delta: f64) -> Vec<StateSpec> {
    let squeeze = Squeezing::new(r, delta);
    let mut v = vec![StateSpec::SqueezedVacuum { squeeze }];
    v.extend([1, 5, 10].map(|n| StateSpec::SqueezedFock { n, squeeze }));
    v
}

fn squeezed_closed_forms() -> tomoarea::Result<Outcome> {
    let mut worst_rel = 0.0_f64;
    let mut worst_delta = 0.0_f64;
    for r in R_GRID {
        let mut first: Option<Vec<f64>> = None;
        for delta in DELTA_GRID {
            let mut sigmas = Vec::new();
            for spec in squeezed_specs(r, delta) {
                let num = sigma(&spec, TIGHT_TAIL)?;
                let exact = sigma_analytic(&spec)?.sigma;
                worst_rel = worst_rel.max((num - exact).abs() / exact);
                sigmas.push(num);
            }
            match &first {
                None => first = Some(sigmas),
                Some(f) => {
                    for (a, b) in f.iter().zip(&sigmas) {
                        worst_delta = worst_delta.max((a - b).abs());
                    }
                }
            }
        }
    }
    Ok(outcome(
        worst_rel < 1e-7 && worst_delta <= 1e-9,
        format!(
            "max relative numeric/elliptic gap {worst_rel:.2e} (tol 1e-7), max δ-spread {worst_delta:.2e} (tol 1e-9) over 64 states"
        ),
    ))
}

fn product_relation() -> tomoarea::Result<Outcome> {
    let mut worst = 0.0_f64;
    for r in R_GRID {
        for delta in DELTA_GRID {
            for n in [1, 5, 10] {
                let (lhs, rhs) = product_relation_check(n, Squeezing::new(r, delta), &opts(TIGHT_TAIL))?;
                worst = worst.max((lhs - rhs).abs() / lhs);
            }
        }
    }
    Ok(outcome(worst < 1e-9, format!("max relative |σ(n,ξ) − σ(n)σ(ξ)/√2π| = {worst:.2e} (tol 1e-9)")))
}

fn displacement_invariance() -> tomoarea::Result<Outcome> {
    let mut worst = 0.0_f64;
    for alpha in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)] {
        for n in [0, 2] {
            for delta in DELTA_GRID {
                let squeeze = Squeezing::new(0.7, delta);
                let plain = sigma(&StateSpec::SqueezedFock { n, squeeze }, TIGHT_TAIL)?;
                let moved = sigma(&StateSpec::DisplacedSqueezedFock { alpha, n, squeeze }, TIGHT_TAIL)?;
                worst = worst.max((plain - moved).abs());
            }
        }
    }
    Ok(outcome(worst <= 1e-7, format!("max |σ(α,n,ξ) − σ(n,ξ)| = {worst:.2e} (tol 1e-7)")))
}

fn pacs(alpha_sq: f64, m: usize) -> StateSpec {
    StateSpec::PhotonAddedCoherent { alpha: Complex64::new(alpha_sq.sqrt(), 0.0), m }
}

fn pacs_anchors() -> tomoarea::Result<Outcome> {
    let mut limit = Vec::new();
    for m in [1, 5, 10] {
        let dev = (area(&pacs(1e-6, m), TIGHT_TAIL)? - (sigma_fock(m) - CLASSICAL_SIGMA)).abs();
        limit.push((m, dev));
    }
    let limit_ok = limit.iter().all(|&(_, d)| d <= 1e-4);

    let by_m: Vec<f64> = (1..=10).map(|m| area(&pacs(5.0, m), TIGHT_TAIL)).collect::<tomoarea::Result<_>>()?;
    let increasing = by_m.windows(2).all(|w| w[1] > w[0]);

    let mut decreasing = true;
    for m in [1, 5, 10] {
        let by_i: Vec<f64> =
            [0.5, 1.0, 2.0, 3.0, 5.0].iter().map(|&i| area(&pacs(i, m), TIGHT_TAIL)).collect::<tomoarea::Result<_>>()?;
        decreasing &= by_i.windows(2).all(|w| w[1] < w[0]);
    }
    let limits: Vec<String> = limit.iter().map(|(m, d)| format!("m={m}: {d:.3e}")).collect();
    Ok(outcome(
        limit_ok && increasing && decreasing,
        format!(
            "|area − Fock(m) area| at |α|² = 1e-6: {} (tol 1e-4); increasing in m at |α|² = 5: {increasing}; decreasing in |α|²: {decreasing}",
            limits.join(", ")
        ),
    ))
}

fn cat_merging() -> tomoarea::Result<Outcome> {
    let cat = |i: f64, phase: f64, h: u8| StateSpec::EvenOddCoherent { alpha: Complex64::from_polar(i.sqrt(), phase), h };
    let mut worst_gap = 0.0_f64;
    let mut worst_phase = 0.0_f64;
    for i in [3.0, 4.0, 5.0, 6.0] {
        let even = area(&cat(i, 0.0, 0), TIGHT_TAIL)?;
        let odd = area(&cat(i, 0.0, 1), TIGHT_TAIL)?;
        worst_gap = worst_gap.max((even - odd).abs() / even.max(odd));
        for h in [0, 1] {
            let base = if h == 0 { even } else { odd };
            for phase in [PI / 4.0, PI / 2.0] {
                worst_phase = worst_phase.max((area(&cat(i, phase, h), TIGHT_TAIL)? - base).abs());
            }
        }
    }
    Ok(outcome(
        worst_gap < 0.01 && worst_phase <= 1e-8,
        format!("max even/odd relative gap {worst_gap:.2e} for |α|² ≥ 3 (tol 1e-2), max phase spread {worst_phase:.2e} (tol 1e-8)"),
    ))
}

fn invariant_suite() -> tomoarea::Result<Outcome> {
    let report = run_checks(&CheckConfig::default())?;
    let failures: Vec<String> = report.failures().map(|f| f.to_string()).collect();
    let mut detail = format!("{} cases, {} checks, {} failed", report.cases, report.outcomes.len(), failures.len());
    for f in failures.iter().take(5) {
        detail.push_str("\n      ");
        detail.push_str(f);
    }
    Ok(outcome(report.cases >= 50 && failures.is_empty(), detail))
}

fn sampling_estimator() -> tomoarea::Result<Outcome> {
    let spec = StateSpec::Fock { n: 3 };
    let truth = sigma_fock(3);
    let sampler = Sampler::new(&expand(&spec, 1e-12)?, &half_turn_angles(64), SamplerOptions::default())?;
    let label = spec.to_string();

    let r = estimate_area(&sampler.sample(100_000, 2019, &label)?)?;
    let miss = (r.sigma - truth).abs();
    let within = miss <= 3.0 * r.error_estimate;

    let sizes = [1_000usize, 10_000, 100_000];
    let mut mean_abs = Vec::new();
    for &n in &sizes {
        let mut total = 0.0;
        for seed in 0..20 {
            total += (estimate_area(&sampler.sample(n, seed, &label)?)?.sigma - truth).abs();
        }
        mean_abs.push(total / 20.0);
    }
    // least-squares slope of log|error| against log N
    let xs: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = mean_abs.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let exponent_ok = (-0.6..=-0.4).contains(&slope);
    Ok(outcome(
        within && exponent_ok,
        format!(
            "|estimate − √14π| = {miss:.3e} vs 3·error = {:.3e}; convergence exponent {slope:.3} (want [−0.6, −0.4]), mean |error| {:.2e}/{:.2e}/{:.2e}",
            3.0 * r.error_estimate,
            mean_abs[0],
            mean_abs[1],
            mean_abs[2]
        ),
    ))
}

fn main() -> ExitCode {
    type Criterion = fn() -> tomoarea::Result<Outcome>;
    let criteria: [(&str, Criterion); 9] = [
        ("classical floor", classical_floor),
        ("Fock exactness", fock_exactness),
        ("squeezed closed forms", squeezed_closed_forms),
        ("product relation", product_relation),
        ("displacement invariance", displacement_invariance),
        ("PACS anchors", pacs_anchors),
        ("even/odd merging", cat_merging),
        ("invariant suite", invariant_suite),
        ("sampling estimator", sampling_estimator),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("{tag} {}. {name} [{secs:.2} s]: {}", i + 1, result.detail);
        if !result.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
