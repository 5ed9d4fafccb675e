//! Field files: a JSON header (`<stem>.json`) next to the values in
//! row-major order, either as little-endian `f64` (`<stem>.bin`) or one value
//! per line (`<stem>.csv`). Both encodings round-trip exactly.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::GridField;
use super::grid::TorusGrid;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldFormat {
    /// Little-endian IEEE-754 doubles.
    Binary,
    Csv,
}

impl FieldFormat {
    fn extension(self) -> &'static str {
        match self {
            FieldFormat::Binary => "bin",
            FieldFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldHeader {
    pub dim: usize,
    pub sizes: Vec<usize>,
    pub lengths: Vec<f64>,
    pub format: FieldFormat,
    /// Name of the data file, relative to the header.
    pub data: String,
}

fn with_ext(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Writes `<stem>.json` and the data file; returns the header path.
pub fn write_field<T: Real>(stem: &Path, u: &GridField<T>, format: FieldFormat) -> Result<PathBuf> {
    let grid = u.grid();
    let data_path = with_ext(stem, format.extension());
    let header = FieldHeader {
        dim: grid.dim(),
        sizes: grid.sizes().to_vec(),
        lengths: grid.lengths().iter().map(|l| l.as_f64()).collect(),
        format,
        data: data_path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };
    match format {
        FieldFormat::Binary => {
            let mut bytes = Vec::with_capacity(8 * u.len());
            for v in u.values() {
                bytes.extend_from_slice(&v.as_f64().to_le_bytes());
            }
            fs::write(&data_path, bytes)?;
        }
        FieldFormat::Csv => {
            let mut text = String::with_capacity(24 * u.len());
            for v in u.values() {
                // shortest representation that parses back to the same f64
                text.push_str(&format!("{:?}\n", v.as_f64()));
            }
            fs::write(&data_path, text)?;
        }
    }
    let header_path = with_ext(stem, "json");
    fs::write(&header_path, serde_json::to_string_pretty(&header)? + "\n")?;
    Ok(header_path)
}

/// Reads a field from its JSON header path.
pub fn read_field<T: Real>(header_path: &Path) -> Result<GridField<T>> {
    let header: FieldHeader = serde_json::from_str(&fs::read_to_string(header_path)?)?;
    if header.dim != header.sizes.len() || header.dim != header.lengths.len() {
        return Err(Error::Format(
            "header dim disagrees with sizes/lengths".into(),
        ));
    }
    let lengths: Vec<T> = header.lengths.iter().map(|&l| T::lit(l)).collect();
    let grid = Arc::new(TorusGrid::new(&header.sizes, &lengths)?);
    let data_path = header_path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join(&header.data);
    let values: Vec<T> = match header.format {
        FieldFormat::Binary => {
            let bytes = fs::read(&data_path)?;
            if bytes.len() != 8 * grid.len() {
                return Err(Error::Format(format!(
                    "{} bytes for {} values",
                    bytes.len(),
                    grid.len()
                )));
            }
            bytes
                .chunks_exact(8)
                .map(|c| T::lit(f64::from_le_bytes(c.try_into().expect("8-byte chunk"))))
                .collect()
        }
        FieldFormat::Csv => fs::read_to_string(&data_path)?
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.trim()
                    .parse::<f64>()
                    .map(T::lit)
                    .map_err(|e| Error::Format(format!("bad value {l:?}: {e}")))
            })
            .collect::<Result<_>>()?,
    };
    GridField::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_and_csv_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Arc::new(TorusGrid::new(&[8, 10], &[1.25, std::f64::consts::TAU]).unwrap());
        let u = GridField::from_fn(grid, |x| (x[0] * 7.3).sin() / 3.0 + x[1].exp() * 1e-9);
        for fmt in [FieldFormat::Binary, FieldFormat::Csv] {
            let stem = dir.path().join(format!("u_{fmt:?}"));
            let header = write_field(&stem, &u, fmt).unwrap();
            let back: GridField<f64> = read_field(&header).unwrap();
            assert_eq!(back, u);
        }
    }

    #[test]
    fn truncated_binary_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Arc::new(TorusGrid::<f64>::periodic_2pi(&[8, 8]).unwrap());
        let stem = dir.path().join("u");
        let header = write_field(&stem, &GridField::zeros(grid), FieldFormat::Binary).unwrap();
        fs::write(with_ext(&stem, "bin"), [0u8; 16]).unwrap();
        assert!(matches!(read_field::<f64>(&header), Err(Error::Format(_))));
    }
}
