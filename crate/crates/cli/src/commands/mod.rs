pub mod bounds;
pub mod identities;
pub mod manufacture;
pub mod models;
pub mod solve;

use crate::output::{exit_code, ErrorRecord, OutDir};
use sigmak::Error;

/// Prints the error, writes `error.json` when a directory is at hand and
/// returns the exit code.
pub(crate) fn fail(out: Option<&OutDir>, e: &Error) -> u8 {
    eprintln!("error: {e}");
    if let Some(dir) = out {
        if let Err(w) = dir.write_json("error.json", &ErrorRecord::from(e)) {
            eprintln!("error: could not write error record: {w}");
        }
    }
    exit_code(e)
}

/// [`fail`] for errors raised before the config names an output directory;
/// the record is written only when `--out` was given.
pub(crate) fn fail_early(out: Option<&std::path::Path>, e: &Error) -> u8 {
    let dir = out.and_then(|p| OutDir::create(p).ok());
    fail(dir.as_ref(), e)
}
