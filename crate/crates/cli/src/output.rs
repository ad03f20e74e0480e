//! File emission: CSV tables, binary field dumps and JSON manifests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use deadwater::spectral::io;
use deadwater::{RealField, SpectralField};
use serde_json::{json, Map, Value};

/// Collects emitted files so the manifest can list them.
pub struct Emitter {
    dir: PathBuf,
    hash: String,
    files: Vec<String>,
}

impl Emitter {
    pub fn new(dir: &Path, hash: &str) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            hash: hash.to_string(),
            files: Vec::new(),
        })
    }

    fn sidecar_extra(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("config_hash".into(), Value::String(self.hash.clone()));
        m
    }

    /// Writes a CSV with a one-line header. Values use the shortest
    /// round-trip representation; integral values print without a fraction.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
        let mut text = header.join(",");
        text.push('\n');
        for row in rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    text.push(',');
                }
                if v.fract() == 0.0 && v.abs() < 1e15 {
                    write!(text, "{}", *v as i64)
                } else {
                    write!(text, "{v:?}")
                }
                .expect("writing to a String");
            }
            text.push('\n');
        }
        let path = self.dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// 1D fields as `x_m,<column>` CSV, 2D fields as `.bin` + `.json`.
    pub fn eta(&mut self, stem: &str, eta: &RealField<f64>, time: f64, epsilon: f64) -> Result<()> {
        if eta.grid.is_2d() {
            io::write_real(&self.dir.join(stem), eta, time, epsilon, self.sidecar_extra())?;
            self.files.push(format!("{stem}.bin"));
            self.files.push(format!("{stem}.json"));
            Ok(())
        } else {
            let grid = eta.grid;
            self.csv(
                &format!("{stem}.csv"),
                &["x_m", "eta_m"],
                eta.values.iter().enumerate().map(|(j, &v)| vec![grid.x(j), v]),
            )
        }
    }

    pub fn spectral(&mut self, stem: &str, field: &SpectralField<f64>, time: f64, epsilon: f64) -> Result<()> {
        io::write_complex(&self.dir.join(stem), field, time, epsilon, self.sidecar_extra())?;
        self.files.push(format!("{stem}.bin"));
        self.files.push(format!("{stem}.json"));
        Ok(())
    }

    /// Raw little-endian matrix with a JSON sidecar describing its layout.
    pub fn matrix(&mut self, stem: &str, rows: usize, cols: usize, data: &[f64], mut meta: Map<String, Value>) -> Result<()> {
        let bytes: Vec<u8> = data.iter().flat_map(|v| v.to_le_bytes()).collect();
        fs::write(self.dir.join(format!("{stem}.bin")), bytes)?;
        meta.insert("rows".into(), json!(rows));
        meta.insert("cols".into(), json!(cols));
        meta.insert("layout".into(), json!("row-major little-endian f64"));
        meta.extend(self.sidecar_extra());
        self.write_json(&format!("{stem}.json"), &Value::Object(meta))?;
        self.files.push(format!("{stem}.bin"));
        self.files.push(format!("{stem}.json"));
        Ok(())
    }

    fn write_json(&self, name: &str, value: &Value) -> Result<()> {
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    /// Writes `<command>.json` with the config hash, the emitted files and
    /// command-specific results.
    pub fn finish(self, command: &str, results: Value) -> Result<PathBuf> {
        let name = format!("{command}.json");
        let manifest = json!({
            "command": command,
            "config_hash": self.hash,
            "files": self.files,
            "results": results,
        });
        self.write_json(&name, &manifest)?;
        Ok(self.dir.join(name))
    }
}
