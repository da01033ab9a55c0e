//! Result bundles: CSV tables, raw little-endian f64 arrays with JSON
//! sidecars, and a manifest that records how to reproduce the run.

use crate::error::Result;
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize)]
pub struct Axis {
    pub name: String,
    pub unit: String,
    pub len: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArraySidecar {
    pub file: String,
    pub element_type: &'static str,
    pub byte_order: &'static str,
    pub layout: &'static str,
    pub shape: Vec<usize>,
    pub axes: Vec<Axis>,
    pub quantity: String,
    pub unit: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: Vec<String>,
    pub code_version: &'static str,
    pub created_unix: u64,
    pub unit_system: &'static str,
    /// Config echo; parsing it reproduces the run.
    pub config: String,
    pub notes: Vec<String>,
    pub files: Vec<String>,
}

pub struct ResultBundle {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

impl ResultBundle {
    pub fn create(dir: &Path, config_toml: String, command: Vec<String>) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let created_unix =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Ok(Self {
            dir: dir.to_path_buf(),
            manifest: Manifest {
                command,
                code_version: env!("CARGO_PKG_VERSION"),
                created_unix,
                unit_system: "internal: Hartree atomic units; files: units in column headers and sidecars",
                config: config_toml,
                notes: Vec::new(),
                files: Vec::new(),
            },
        })
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.manifest.notes.push(s.into());
    }

    fn record(&mut self, name: &str) -> PathBuf {
        self.manifest.files.push(name.to_string());
        self.dir.join(name)
    }

    /// Comma-separated table with one header row. Numbers use the shortest
    /// representation that round-trips, so output is reproducible.
    pub fn write_csv(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<PathBuf> {
        let mut s = header.join(",");
        s.push('\n');
        for r in rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        let p = self.record(name);
        fs::write(&p, s)?;
        Ok(p)
    }

    pub fn write_array(&mut self, name: &str, data: &[f64], axes: Vec<Axis>, quantity: &str, unit: &str) -> Result<PathBuf> {
        let mut bytes = Vec::with_capacity(8 * data.len());
        for x in data {
            bytes.extend_from_slice(&x.to_le_bytes());
        }
        let p = self.record(&format!("{name}.f64"));
        fs::write(&p, bytes)?;
        let side = ArraySidecar {
            file: format!("{name}.f64"),
            element_type: "f64",
            byte_order: "little-endian",
            layout: "row-major (last axis fastest)",
            shape: axes.iter().map(|a| a.len).collect(),
            axes,
            quantity: quantity.into(),
            unit: unit.into(),
        };
        let sp = self.record(&format!("{name}.json"));
        fs::write(sp, serde_json::to_string_pretty(&side).expect("sidecar serializes"))?;
        Ok(p)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let p = self.record(name);
        fs::write(&p, serde_json::to_string_pretty(value).expect("serializable"))?;
        Ok(p)
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        let p = self.record(name);
        fs::write(&p, text)?;
        Ok(p)
    }

    pub fn finish(self) -> Result<PathBuf> {
        let p = self.dir.join("manifest.json");
        fs::write(&p, serde_json::to_string_pretty(&self.manifest).expect("manifest serializes"))?;
        Ok(p)
    }
}

/// Shortest round-trip formatting; `None` becomes `nan`.
pub fn fmt(x: f64) -> String {
    let mut s = String::new();
    write!(s, "{x}").unwrap();
    s
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_else(|| "nan".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrays_round_trip_with_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let mut b = ResultBundle::create(dir.path(), "scenario = \"quantum_ring\"".into(), vec!["test".into()]).unwrap();
        let data = [1.5, -2.25, 3.0e-300, f64::MAX, 0.0, 7.0];
        let axes = vec![
            Axis { name: "R".into(), unit: "Å".into(), len: 2 },
            Axis { name: "q".into(), unit: "sqrt(aJ)*fs".into(), len: 3 },
        ];
        b.write_array("v", &data, axes, "V_0", "meV").unwrap();
        b.write_csv("t.csv", &["q[sqrt(aJ)*fs]".into(), "V_0[meV]".into()], &[vec![fmt(0.1), fmt(2.0)]]).unwrap();
        b.finish().unwrap();
        let bytes = fs::read(dir.path().join("v.f64")).unwrap();
        let back: Vec<f64> = bytes.chunks(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        assert_eq!(back, data);
        let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("v.json")).unwrap()).unwrap();
        assert_eq!(side["shape"], serde_json::json!([2, 3]));
        assert_eq!(side["byte_order"], "little-endian");
        let csv = fs::read_to_string(dir.path().join("t.csv")).unwrap();
        assert_eq!(csv, "q[sqrt(aJ)*fs],V_0[meV]\n0.1,2\n");
        let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
        assert_eq!(m["files"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn unwritable_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain");
        fs::write(&file, "x").unwrap();
        assert!(ResultBundle::create(&file.join("sub"), String::new(), vec![]).is_err());
    }
}
