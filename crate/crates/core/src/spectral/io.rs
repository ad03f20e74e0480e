//! Binary field dumps with JSON sidecars.
//!
//! A dump `name` is two files: `name.bin` holds header-free little-endian
//! `f64` values (complex fields as interleaved `re, im` pairs) in row-major
//! order with `x` fastest, and `name.json` describes the layout.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{Grid, RealField, SpectralField};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(flatten)]
    pub grid: Grid<f64>,
    pub kind: FieldKind,
    pub time: f64,
    pub epsilon: f64,
    /// Caller-supplied keys (e.g. a configuration hash).
    #[serde(flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

fn grid_f64<T: Real>(g: &Grid<T>) -> Grid<f64> {
    match g.ly() {
        Some(ly) => Grid::new_2d(g.lx().as_f64(), g.nx(), ly.as_f64(), g.ny()),
        None => Grid::new_1d(g.lx().as_f64(), g.nx()),
    }
    .expect("a valid grid stays valid in f64")
}

fn paths(base: &Path) -> (PathBuf, PathBuf) {
    (base.with_extension("bin"), base.with_extension("json"))
}

fn write_dump(base: &Path, sidecar: &Sidecar, data: impl Iterator<Item = f64>) -> Result<()> {
    let (bin, json) = paths(base);
    let mut w = BufWriter::new(fs::File::create(bin)?);
    for v in data {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    fs::write(json, serde_json::to_string_pretty(sidecar)? + "\n")?;
    Ok(())
}

fn read_dump(base: &Path, kind: FieldKind) -> Result<(Vec<f64>, Sidecar)> {
    let (bin, json) = paths(base);
    let sidecar: Sidecar = serde_json::from_str(&fs::read_to_string(json)?)?;
    if sidecar.kind != kind {
        return Err(Error::Contract(format!("dump holds a {:?} field", sidecar.kind)));
    }
    let bytes = fs::read(bin)?;
    let per = if kind == FieldKind::Complex { 2 } else { 1 };
    if bytes.len() != 8 * per * sidecar.grid.len() {
        return Err(Error::Contract("binary size does not match the sidecar grid".into()));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok((data, sidecar))
}

/// Writes `base.bin` and `base.json` for a real field.
pub fn write_real<T: Real>(
    base: &Path,
    field: &RealField<T>,
    time: f64,
    epsilon: f64,
    extra: serde_json::Map<String, serde_json::Value>,
) -> Result<()> {
    let sidecar = Sidecar {
        grid: grid_f64(&field.grid),
        kind: FieldKind::Real,
        time,
        epsilon,
        extra,
    };
    write_dump(base, &sidecar, field.values.iter().map(|v| v.as_f64()))
}

/// Writes `base.bin` and `base.json` for a complex field.
pub fn write_complex<T: Real>(
    base: &Path,
    field: &SpectralField<T>,
    time: f64,
    epsilon: f64,
    extra: serde_json::Map<String, serde_json::Value>,
) -> Result<()> {
    let sidecar = Sidecar {
        grid: grid_f64(&field.grid),
        kind: FieldKind::Complex,
        time,
        epsilon,
        extra,
    };
    let data = field.values.iter().flat_map(|c| [c.re.as_f64(), c.im.as_f64()]);
    write_dump(base, &sidecar, data)
}

pub fn read_real(base: &Path) -> Result<(RealField<f64>, Sidecar)> {
    let (data, sidecar) = read_dump(base, FieldKind::Real)?;
    Ok((RealField::new(sidecar.grid, data)?, sidecar))
}

pub fn read_complex(base: &Path) -> Result<(SpectralField<f64>, Sidecar)> {
    let (data, sidecar) = read_dump(base, FieldKind::Complex)?;
    let values = data.chunks_exact(2).map(|p| Complex::new(p[0], p[1])).collect();
    Ok((SpectralField::new(sidecar.grid, values)?, sidecar))
}
