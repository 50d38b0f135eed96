//! Artifact writers: CSV tables, binary PGM heatmaps, and JSON summaries.
//!
//! CSV floats use Rust's shortest round-trip formatting, so identical numbers
//! produce identical bytes and a rerun with the same seed and configuration
//! is byte-for-byte reproducible. PGM images are 8-bit P5, max-normalized:
//! nonnegative matrices map [0, max] onto [0, 255]; fluctuation matrices map
//! [min, max]; the constants land in the JSON summary next to the file name.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use pairwalk_core::{CorrelationKind, CorrelationMatrix};
use serde::Serialize;

/// Normalization record for one emitted image or matrix.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub file: String,
    /// Value mapped to pixel 0 (PGM only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    /// Value mapped to pixel 255 (PGM only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

pub fn write_text(dir: &Path, name: &str, body: &str) -> std::io::Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, body)?;
    Ok(path)
}

/// Matrix CSV with a header row of site indices and one labeled row per site.
pub fn matrix_csv(label: &str, data: &nalgebra::DMatrix<f64>) -> String {
    let mut body = String::new();
    body.push_str(label);
    for c in 0..data.ncols() {
        let _ = write!(body, ",{c}");
    }
    body.push('\n');
    for r in 0..data.nrows() {
        let _ = write!(body, "{r}");
        for c in 0..data.ncols() {
            let _ = write!(body, ",{}", data[(r, c)]);
        }
        body.push('\n');
    }
    body
}

/// Column CSV: `site,<name>` rows.
pub fn column_csv(name: &str, values: &[f64]) -> String {
    let mut body = format!("site,{name}\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(body, "{i},{v}");
    }
    body
}

/// Row-per-time CSV for density evolutions; first column is the time.
pub fn evolution_csv(times: &[f64], rows: &[Vec<f64>]) -> String {
    let sites = rows.first().map_or(0, Vec::len);
    let mut body = String::from("time");
    for c in 0..sites {
        let _ = write!(body, ",{c}");
    }
    body.push('\n');
    for (t, row) in times.iter().zip(rows) {
        let _ = write!(body, "{t}");
        for v in row {
            let _ = write!(body, ",{v}");
        }
        body.push('\n');
    }
    body
}

/// Quantize one value into [0, 255] given the recorded normalization.
pub fn quantize(value: f64, min: f64, max: f64) -> u8 {
    if max <= min {
        return 0;
    }
    (255.0 * (value - min) / (max - min)).round().clamp(0.0, 255.0) as u8
}

/// Normalization range used for a matrix image.
pub fn pgm_range(kind: CorrelationKind, data: &nalgebra::DMatrix<f64>) -> (f64, f64) {
    let max = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    match kind {
        CorrelationKind::Bare => (0.0, max.max(0.0)),
        CorrelationKind::Fluctuation => {
            let min = data.iter().copied().fold(f64::INFINITY, f64::min);
            (min, max)
        }
    }
}

/// Binary P5 image of a matrix, row-major.
pub fn write_pgm(
    dir: &Path,
    name: &str,
    data: &nalgebra::DMatrix<f64>,
    min: f64,
    max: f64,
) -> std::io::Result<OutputRecord> {
    let path = dir.join(name);
    let mut file = std::fs::File::create(&path)?;
    write!(file, "P5\n{} {}\n255\n", data.ncols(), data.nrows())?;
    let mut pixels = Vec::with_capacity(data.nrows() * data.ncols());
    for r in 0..data.nrows() {
        for c in 0..data.ncols() {
            pixels.push(quantize(data[(r, c)], min, max));
        }
    }
    file.write_all(&pixels)?;
    Ok(OutputRecord { file: name.to_string(), min: Some(min), max: Some(max) })
}

/// Emit a correlation matrix in the requested formats; returns the records.
pub fn emit_matrix(
    dir: &Path,
    stem: &str,
    matrix: &CorrelationMatrix,
    want_csv: bool,
    want_pgm: bool,
) -> std::io::Result<Vec<OutputRecord>> {
    let mut records = Vec::new();
    if want_csv {
        let name = format!("{stem}.csv");
        write_text(dir, &name, &matrix_csv("site", matrix.data()))?;
        records.push(OutputRecord { file: name, min: None, max: None });
    }
    if want_pgm {
        let (min, max) = pgm_range(matrix.kind(), matrix.data());
        records.push(write_pgm(dir, &format!("{stem}.pgm"), matrix.data(), min, max)?);
    }
    Ok(records)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> std::io::Result<()> {
    let body = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    std::fs::write(dir.join(name), body)
}
