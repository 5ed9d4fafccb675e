use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sigmak::{Error, Result};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VIOLATION: u8 = 1;
    pub const CONFIG: u8 = 2;
    pub const NOT_ADMISSIBLE: u8 = 3;
    pub const NO_CONVERGENCE: u8 = 4;
    pub const IO: u8 = 5;
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Shape(_) | Error::Format(_) | Error::HarnackInfeasible { .. } => {
            exit::CONFIG
        }
        Error::NotAdmissible { .. } => exit::NOT_ADMISSIBLE,
        Error::NoConvergence { .. }
        | Error::ContinuationStalled { .. }
        | Error::FixedPointStalled { .. } => exit::NO_CONVERGENCE,
        Error::Io(_) => exit::IO,
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Shape(_) => "shape",
        Error::NotAdmissible { .. } => "not_admissible",
        Error::NoConvergence { .. } => "no_convergence",
        Error::ContinuationStalled { .. } => "continuation_stalled",
        Error::FixedPointStalled { .. } => "fixed_point_stalled",
        Error::HarnackInfeasible { .. } => "harnack_infeasible",
        Error::Io(_) => "io",
        Error::Format(_) => "format",
    }
}

/// Machine-readable failure description written next to the artifacts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub exit_code: u8,
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<usize>,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord {
            exit_code: exit_code(e),
            kind: kind(e),
            message: e.to_string(),
            point: match e {
                Error::NotAdmissible { point, .. } => *point,
                _ => None,
            },
        }
    }
}

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(OutDir {
            root: root.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_text(name, &text)
    }

    pub fn write_jsonl<T: Serialize>(
        &self,
        name: &str,
        rows: impl IntoIterator<Item = T>,
    ) -> Result<PathBuf> {
        let mut text = String::new();
        for r in rows {
            text.push_str(&serde_json::to_string(&r)?);
            text.push('\n');
        }
        self.write_text(name, &text)
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf> {
        let p = self.path(name);
        fs::write(&p, text)?;
        Ok(p)
    }

    pub fn remove(&self, name: &str) -> Result<()> {
        match fs::remove_file(self.path(name)) {
            Ok(()) => Ok(()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
            Err(e) => Err(e.into()),
        }
    }
}
