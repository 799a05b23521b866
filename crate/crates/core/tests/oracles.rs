//! Values frozen from independent high-precision evaluations
//! (`oracles/frozen_values.py`, mpmath at 50 digits) and from exact rational
//! arithmetic.

use std::f64::consts::{PI, SQRT_2};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use tomoarea::specialfn::{elliptic_e_incomplete, elliptic_e_incomplete_carlson, hermite_function, laguerre, EllipticParameter};
use tomoarea::{sigma_analytic, sigma_numeric, expand, AreaOptions, Squeezing, StateSpec};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn hermite_function_values() {
    let cases = [
        (25, 3.7, 0.019_162_904_373_834_812),
        (0, 0.3, 0.718_074_129_049_001_1),
        (7, -1.25, -0.415_861_018_663_893_4),
        (60, 5.5, 0.062_186_446_863_997_51),
        (200, 12.0, 0.077_335_120_134_146_8),
        (400, -20.5, -0.176_731_916_552_436_56),
        (512, 31.0, -0.021_476_017_834_159_627),
    ];
    for (n, x, expect) in cases {
        let got = hermite_function(n, x).unwrap();
        assert!(rel(got, expect) < 1e-12, "ψ_{n}({x}) = {got}, expected {expect}");
    }
}

/// `H_25(37/10)` by the physicists' recurrence in exact rationals.
#[test]
fn hermite_exact_rational() {
    let x = BigRational::new(BigInt::from(37), BigInt::from(10));
    let two = BigRational::from_integer(BigInt::from(2));
    let (mut h0, mut h1) = (BigRational::from_integer(BigInt::from(1)), &two * &x);
    for k in 1..25 {
        let next = &two * &x * &h1 - &two * BigRational::from_integer(BigInt::from(k)) * &h0;
        h0 = h1;
        h1 = next;
    }
    let h25 = h1.to_f64().unwrap();
    let ln_norm = 0.25 * PI.ln() + 12.5 * 2f64.ln() + (1..=25).map(|k| (k as f64).ln()).sum::<f64>() * 0.5;
    let psi = h25 * (-0.5 * 3.7f64 * 3.7 - ln_norm).exp();
    assert!(rel(hermite_function(25, 3.7).unwrap(), psi) < 1e-12);
}

#[test]
fn laguerre_values() {
    // L_10(−5) = 1067091709/48384 exactly
    let exact = BigRational::new(BigInt::from(1_067_091_709), BigInt::from(48_384)).to_f64().unwrap();
    assert!(rel(laguerre(10, -5.0).unwrap(), exact) < 1e-14);
    for (m, x, expect) in [
        (3, -0.7, 3.892_166_666_666_666_8),
        (25, -2.5, 263_536.128_317_177_5),
        (100, -10.0, 1.500_183_066_898_858e24),
    ] {
        assert!(rel(laguerre(m, x).unwrap(), expect) < 1e-12, "L_{m}({x})");
    }
}

#[test]
fn elliptic_values() {
    let cases = [
        (2.0 * PI, 1.0 - std::f64::consts::E.powi(2), 12.313_779_992_733_568),
        (0.3, 0.5, 0.297_775_371_953_160_23),
        (1.2, -3.0, 1.693_110_169_572_372_5),
        (2.9, -50.0, 14.354_009_079_621_66),
        (5.0, 0.99, 3.100_231_365_424_339),
        (PI / 2.0, -402.4287934927351, 20.182_357_067_473_106),
    ];
    for (phi, m, expect) in cases {
        let p = EllipticParameter::new(m).unwrap();
        assert!(rel(elliptic_e_incomplete(phi, p).unwrap(), expect) < 1e-12, "E({phi}|{m})");
        assert!(rel(elliptic_e_incomplete_carlson(phi, p).unwrap(), expect) < 1e-12, "Carlson E({phi}|{m})");
    }
}

#[test]
fn squeezed_sigma_values() {
    let cases = [
        (0.1, 4.476_211_563_347_246, 14.845_914_237_872_977),
        (0.5, 5.281_157_882_559_285, 17.515_619_155_076_955),
        (1.0, 7.892_810_707_276_03, 26.177_491_657_334_215),
        (1.5, 12.737_234_840_490_15, 42.244_628_832_548_14),
    ];
    for (r, vac, fock5) in cases {
        let sq = Squeezing::new(r, 0.0);
        let a = sigma_analytic(&StateSpec::SqueezedVacuum { squeeze: sq }).unwrap().sigma;
        assert!(rel(a, vac) < 1e-12, "r = {r}: {a} vs {vac}");
        let a5 = sigma_analytic(&StateSpec::SqueezedFock { n: 5, squeeze: sq }).unwrap().sigma;
        assert!(rel(a5, fock5) < 1e-12, "r = {r}, n = 5: {a5} vs {fock5}");
    }
}

#[test]
fn fock_sigma_values() {
    for n in [0usize, 1, 2, 7, 30] {
        let exact = (2.0 * (2 * n + 1) as f64).sqrt() * PI;
        let r = sigma_numeric(&expand(&StateSpec::Fock { n }, 1e-10).unwrap(), &AreaOptions::default()).unwrap();
        assert!((r.sigma - exact).abs() < 1e-10);
    }
    // vacuum reaches the classical value exactly
    let vac = sigma_analytic(&StateSpec::Fock { n: 0 }).unwrap();
    assert!((vac.sigma - SQRT_2 * PI).abs() < 1e-15);
}
