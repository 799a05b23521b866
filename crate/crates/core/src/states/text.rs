//! Text form of [`StateSpec`]: `family:key=value,key=value`.
//!
//! | family    | keys                         |
//! |-----------|------------------------------|
//! | `fock`    | `n`                          |
//! | `coherent`| `alpha`                      |
//! | `sqvac`   | `r`, `delta`                 |
//! | `sqfock`  | `n`, `r`, `delta`            |
//! | `dsqfock` | `alpha`, `n`, `r`, `delta`   |
//! | `sqcoh`   | `alpha`, `r`, `delta` (dsqfock with n = 0) |
//! | `pacs`    | `alpha`, `m`                 |
//! | `cat`     | `alpha`, `h`                 |
//! | `custom`  | `c` (`;`-separated complex list) |
//!
//! `delta` defaults to 0. Complex values are written `re+imi`, `re-imi`,
//! `imi`, `re`, or in polar form `mag@phase`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use super::{Squeezing, StateSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseSpecError {
    #[error("state spec must look like `family:key=value,...`, got `{0}`")]
    Syntax(String),
    #[error("unknown state family `{0}`")]
    UnknownFamily(String),
    #[error("`{family}` does not take key `{key}`")]
    UnknownKey { family: String, key: String },
    #[error("`{family}` requires key `{key}`")]
    MissingKey { family: String, key: String },
    #[error("key `{0}` given twice")]
    DuplicateKey(String),
    #[error("cannot parse `{value}` for `{key}`")]
    BadValue { key: String, value: String },
    #[error("invalid state: {0}")]
    Invalid(String),
}

fn parse_real(key: &str, s: &str) -> Result<f64, ParseSpecError> {
    let s = s.trim();
    let bad = || ParseSpecError::BadValue { key: key.to_string(), value: s.to_string() };
    // reject inf/nan spellings that f64::from_str accepts
    if s.is_empty() || s.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
        return Err(bad());
    }
    let v: f64 = s.parse().map_err(|_| bad())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Parses `re+imi`, `re-imi`, `imi`, `re`, or `mag@phase`.
pub fn parse_complex(s: &str) -> Result<Complex64, ParseSpecError> {
    let s = s.trim();
    let bad = || ParseSpecError::BadValue { key: "complex".into(), value: s.to_string() };
    if let Some((mag, phase)) = s.split_once('@') {
        let mag = parse_real("magnitude", mag).map_err(|_| bad())?;
        let phase = parse_real("phase", phase).map_err(|_| bad())?;
        return Ok(Complex64::from_polar(mag, phase));
    }
    let Some(body) = s.strip_suffix('i') else {
        return parse_real("complex", s).map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is neither leading nor part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { parse_real("complex", re).map_err(|_| bad())? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real("complex", other.strip_prefix('+').unwrap_or(other)).map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_usize(key: &str, s: &str) -> Result<usize, ParseSpecError> {
    let s = s.trim();
    if s.starts_with('+') {
        return Err(ParseSpecError::BadValue { key: key.into(), value: s.into() });
    }
    s.parse().map_err(|_| ParseSpecError::BadValue { key: key.into(), value: s.into() })
}

struct Fields<'a> {
    family: &'a str,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Fields<'a> {
    fn take(&mut self, key: &str) -> Result<&'a str, ParseSpecError> {
        self.map.remove(key).ok_or_else(|| ParseSpecError::MissingKey {
            family: self.family.to_string(),
            key: key.to_string(),
        })
    }

    fn finish(self) -> Result<(), ParseSpecError> {
        match self.map.keys().next() {
            Some(k) => Err(ParseSpecError::UnknownKey {
                family: self.family.to_string(),
                key: k.to_string(),
            }),
            None => Ok(()),
        }
    }

    fn squeezing(&mut self) -> Result<Squeezing, ParseSpecError> {
        let r = parse_real("r", self.take("r")?)?;
        let delta = match self.map.remove("delta") {
            Some(v) => parse_real("delta", v)?,
            None => 0.0,
        };
        Ok(Squeezing::new(r, delta))
    }

    fn complex(&mut self, key: &str) -> Result<Complex64, ParseSpecError> {
        let value = self.take(key)?;
        parse_complex(value).map_err(|_| ParseSpecError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
        })
    }
}

impl FromStr for StateSpec {
    type Err = ParseSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (family, rest) = s.split_once(':').ok_or_else(|| ParseSpecError::Syntax(s.to_string()))?;
        let family = family.trim();
        let mut map = BTreeMap::new();
        if !rest.trim().is_empty() {
            for part in rest.split(',') {
                let (k, v) = part.split_once('=').ok_or_else(|| ParseSpecError::Syntax(s.to_string()))?;
                let k = k.trim();
                if k.is_empty() {
                    return Err(ParseSpecError::Syntax(s.to_string()));
                }
                if map.insert(k, v.trim()).is_some() {
                    return Err(ParseSpecError::DuplicateKey(k.to_string()));
                }
            }
        }
        let mut f = Fields { family, map };
        let spec = match family {
            "fock" => StateSpec::Fock { n: parse_usize("n", f.take("n")?)? },
            "coherent" => StateSpec::Coherent { alpha: f.complex("alpha")? },
            "sqvac" => StateSpec::SqueezedVacuum { squeeze: f.squeezing()? },
            "sqfock" => {
                let n = parse_usize("n", f.take("n")?)?;
                StateSpec::SqueezedFock { n, squeeze: f.squeezing()? }
            }
            "dsqfock" => {
                let alpha = f.complex("alpha")?;
                let n = parse_usize("n", f.take("n")?)?;
                StateSpec::DisplacedSqueezedFock { alpha, n, squeeze: f.squeezing()? }
            }
            "sqcoh" => {
                let alpha = f.complex("alpha")?;
                StateSpec::DisplacedSqueezedFock { alpha, n: 0, squeeze: f.squeezing()? }
            }
            "pacs" => {
                let alpha = f.complex("alpha")?;
                StateSpec::PhotonAddedCoherent { alpha, m: parse_usize("m", f.take("m")?)? }
            }
            "cat" => {
                let alpha = f.complex("alpha")?;
                let h = parse_usize("h", f.take("h")?)?;
                let h = u8::try_from(h).map_err(|_| ParseSpecError::Invalid(format!("h must be 0 or 1, got {h}")))?;
                StateSpec::EvenOddCoherent { alpha, h }
            }
            "custom" => {
                let list = f.take("c")?;
                let coefficients = list
                    .split(';')
                    .map(parse_complex)
                    .collect::<Result<Vec<_>, _>>()?;
                StateSpec::CustomFock { coefficients }
            }
            other => return Err(ParseSpecError::UnknownFamily(other.to_string())),
        };
        f.finish()?;
        spec.validate().map_err(|e| ParseSpecError::Invalid(e.to_string()))?;
        Ok(spec)
    }
}

struct Cx(Complex64);

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.0;
        if im == 0.0 {
            write!(f, "{re}")
        } else if im < 0.0 {
            write!(f, "{re}-{}i", -im)
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Fock { n } => write!(f, "fock:n={n}"),
            StateSpec::Coherent { alpha } => write!(f, "coherent:alpha={}", Cx(*alpha)),
            StateSpec::SqueezedVacuum { squeeze: s } => write!(f, "sqvac:r={},delta={}", s.r, s.delta),
            StateSpec::SqueezedFock { n, squeeze: s } => {
                write!(f, "sqfock:n={n},r={},delta={}", s.r, s.delta)
            }
            StateSpec::DisplacedSqueezedFock { alpha, n, squeeze: s } => {
                write!(f, "dsqfock:alpha={},n={n},r={},delta={}", Cx(*alpha), s.r, s.delta)
            }
            StateSpec::PhotonAddedCoherent { alpha, m } => write!(f, "pacs:alpha={},m={m}", Cx(*alpha)),
            StateSpec::EvenOddCoherent { alpha, h } => write!(f, "cat:alpha={},h={h}", Cx(*alpha)),
            StateSpec::CustomFock { coefficients } => {
                write!(f, "custom:c=")?;
                for (i, c) in coefficients.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{}", Cx(*c))?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("1-2i").unwrap(), c(1.0, -2.0));
        assert_eq!(parse_complex("-1.5").unwrap(), c(-1.5, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex("-1e-3-2e-2i").unwrap(), c(-1e-3, -2e-2));
        let p = parse_complex("2@1.5707963267948966").unwrap();
        assert!((p - c(0.0, 2.0)).norm() < 1e-15);
        for bad in ["", "i2", "1+2j", "inf", "nan", "1++2i", "@", "1@", "1+2i3"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn spec_examples() {
        assert_eq!("fock:n=3".parse::<StateSpec>().unwrap(), StateSpec::Fock { n: 3 });
        assert_eq!(
            "sqvac:r=0.5,delta=0".parse::<StateSpec>().unwrap(),
            StateSpec::SqueezedVacuum { squeeze: Squeezing::new(0.5, 0.0) }
        );
        assert_eq!(
            "pacs:alpha=2.236,m=5".parse::<StateSpec>().unwrap(),
            StateSpec::PhotonAddedCoherent { alpha: c(2.236, 0.0), m: 5 }
        );
        assert_eq!(
            "cat:alpha=1.0,h=0".parse::<StateSpec>().unwrap(),
            StateSpec::EvenOddCoherent { alpha: c(1.0, 0.0), h: 0 }
        );
        assert_eq!(
            "sqcoh:alpha=1+1i,r=0.2".parse::<StateSpec>().unwrap(),
            StateSpec::DisplacedSqueezedFock { alpha: c(1.0, 1.0), n: 0, squeeze: Squeezing::new(0.2, 0.0) }
        );
        assert_eq!(
            "custom:c=0.6;0.8i".parse::<StateSpec>().unwrap(),
            StateSpec::CustomFock { coefficients: vec![c(0.6, 0.0), c(0.0, 0.8)] }
        );
    }

    #[test]
    fn spec_errors() {
        use ParseSpecError::*;
        assert!(matches!("fock".parse::<StateSpec>(), Err(Syntax(_))));
        assert!(matches!("boson:n=1".parse::<StateSpec>(), Err(UnknownFamily(_))));
        assert!(matches!("fock:n=1,m=2".parse::<StateSpec>(), Err(UnknownKey { .. })));
        assert!(matches!("fock:".parse::<StateSpec>(), Err(MissingKey { .. })));
        assert!(matches!("fock:n=1,n=2".parse::<StateSpec>(), Err(DuplicateKey(_))));
        assert!(matches!("fock:n=-1".parse::<StateSpec>(), Err(BadValue { .. })));
        assert!(matches!("sqvac:r=-0.5".parse::<StateSpec>(), Err(Invalid(_))));
        assert!(matches!("cat:alpha=1,h=2".parse::<StateSpec>(), Err(Invalid(_))));
        assert!(matches!("cat:alpha=1,h=300".parse::<StateSpec>(), Err(Invalid(_))));
        assert!(matches!("fock:n=100000".parse::<StateSpec>(), Err(Invalid(_))));
    }

    fn arb_complex() -> impl Strategy<Value = Complex64> {
        (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(a, b)| c(a, b))
    }

    fn arb_spec() -> impl Strategy<Value = StateSpec> {
        let sq = (0.0f64..2.0, 0.0f64..6.3).prop_map(|(r, d)| Squeezing::new(r, d));
        prop_oneof![
            (0usize..100).prop_map(|n| StateSpec::Fock { n }),
            arb_complex().prop_map(|alpha| StateSpec::Coherent { alpha }),
            sq.clone().prop_map(|squeeze| StateSpec::SqueezedVacuum { squeeze }),
            (0usize..20, sq.clone()).prop_map(|(n, squeeze)| StateSpec::SqueezedFock { n, squeeze }),
            (arb_complex(), 0usize..20, sq)
                .prop_map(|(alpha, n, squeeze)| StateSpec::DisplacedSqueezedFock { alpha, n, squeeze }),
            (arb_complex(), 0usize..20).prop_map(|(alpha, m)| StateSpec::PhotonAddedCoherent { alpha, m }),
            (arb_complex(), 0u8..2).prop_map(|(alpha, h)| StateSpec::EvenOddCoherent { alpha, h }),
        ]
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(spec in arb_spec()) {
            let text = spec.to_string();
            let back: StateSpec = text.parse().unwrap();
            prop_assert_eq!(back, spec);
        }
    }
}
