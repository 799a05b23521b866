//! Dataset files: `theta,x` CSV plus a JSON sidecar manifest.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HomodyneDataset;
use crate::error::{Error, Result};
use crate::quadrep::full;

/// Sidecar metadata of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub spec: String,
    pub seed: u64,
    pub angles: Vec<f64>,
    pub samples_per_angle: usize,
    pub generator: String,
    pub code_version: String,
    /// Seconds since the Unix epoch; the only field that differs between
    /// otherwise identical runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_unix: Option<u64>,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text)?;
        if m.angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::Format("manifest angles must be finite".into()));
        }
        Ok(m)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// `data.csv` → `data.manifest.json`.
pub fn manifest_path(csv_path: &Path) -> PathBuf {
    let stem = csv_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    csv_path.with_file_name(format!("{stem}.manifest.json"))
}

/// Parses `theta,x` records. Both columns must be finite numbers.
pub fn parse_records<R: Read>(input: R) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "theta" || &headers[1] != "x" {
        return Err(Error::Format(format!("expected header `theta,x`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut out = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(Error::Format(format!("record {} has {} fields", line + 1, rec.len())));
        }
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| Error::Format(format!("record {}: `{s}` is not a number", line + 1)))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Format(format!("record {}: non-finite value", line + 1)))
            }
        };
        out.push((parse(&rec[0])?, parse(&rec[1])?));
    }
    Ok(out)
}

impl HomodyneDataset {
    /// CSV with header `theta,x` in record order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta", "x"])?;
        for (t, x) in &self.records {
            w.write_record([full(*t), full(*x)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            spec: self.spec_label.clone(),
            seed: self.seed,
            angles: self.angles.clone(),
            samples_per_angle: self.samples_per_angle,
            generator: self.generator.clone(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            created_unix: None,
        }
    }

    /// Writes `path` and its sidecar manifest.
    pub fn save(&self, path: &Path, created_unix: Option<u64>) -> Result<PathBuf> {
        self.write_csv(BufWriter::new(File::create(path)?))?;
        let mpath = manifest_path(path);
        let mut manifest = self.manifest();
        manifest.created_unix = created_unix;
        std::fs::write(&mpath, manifest.to_json()? + "\n")?;
        Ok(mpath)
    }

    /// Builds a dataset from parsed records.
    ///
    /// With a manifest the angles and per-angle count come from it. Without
    /// one they are inferred: the distinct θ values in ascending order, and
    /// a count that must be the same for every angle.
    pub fn from_records(records: Vec<(f64, f64)>, manifest: Option<Manifest>) -> Result<Self> {
        let data = match manifest {
            Some(m) => Self {
                records,
                spec_label: m.spec,
                seed: m.seed,
                angles: m.angles,
                samples_per_angle: m.samples_per_angle,
                generator: m.generator,
            },
            None => {
                let mut angles: Vec<f64> = records.iter().map(|r| r.0).collect();
                angles.sort_by(f64::total_cmp);
                angles.dedup();
                let per = if angles.is_empty() { 0 } else { records.len() / angles.len() };
                Self {
                    records,
                    spec_label: "external".into(),
                    seed: 0,
                    angles,
                    samples_per_angle: per,
                    generator: "unknown".into(),
                }
            }
        };
        Ok(data)
    }

    /// Reads a CSV file, using the sidecar manifest if one exists (or the
    /// explicit `manifest` path).
    pub fn load(path: &Path, manifest: Option<&Path>) -> Result<Self> {
        let records = parse_records(BufReader::new(File::open(path)?))?;
        let mpath = manifest.map(Path::to_path_buf).unwrap_or_else(|| manifest_path(path));
        let manifest = if manifest.is_some() || mpath.exists() {
            Some(Manifest::from_json(&std::fs::read_to_string(&mpath)?)?)
        } else {
            None
        };
        Self::from_records(records, manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_name() {
        assert_eq!(manifest_path(Path::new("/tmp/run.csv")), PathBuf::from("/tmp/run.manifest.json"));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_records("theta,x\n0,1\n0.5,-2e-3\n".as_bytes()).is_ok());
        assert!(parse_records("a,b\n0,1\n".as_bytes()).is_err());
        assert!(parse_records("theta,x\n0,nan\n".as_bytes()).is_err());
        assert!(parse_records("theta,x\n0,1,2\n".as_bytes()).is_err());
        assert!(parse_records("theta,x\n0,zz\n".as_bytes()).is_err());
    }

    #[test]
    fn manifest_roundtrip() {
        let m = Manifest {
            spec: "fock:n=1".into(),
            seed: 7,
            angles: vec![0.0, 1.0],
            samples_per_angle: 30,
            generator: "g".into(),
            code_version: "0".into(),
            created_unix: Some(5),
        };
        assert_eq!(Manifest::from_json(&m.to_json().unwrap()).unwrap(), m);
        assert!(Manifest::from_json("{\"spec\": 1}").is_err());
    }
}
