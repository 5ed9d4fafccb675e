use std::path::{Path, PathBuf};

use sigmak::geometry::io::{write_field, FieldFormat};
use sigmak::pde::manufacture;
use sigmak::{Error, Result};

use super::{fail, fail_early};
use crate::config::{FieldSource, LoadedConfig};
use crate::output::{exit, OutDir};

fn load(config: &Path) -> Result<LoadedConfig> {
    let cfg = LoadedConfig::load(config, false)?;
    if cfg.config.manufactured.is_none() {
        return Err(Error::Format(
            "manufacture needs a \"manufactured\" section".into(),
        ));
    }
    Ok(cfg)
}

/// Writes `target`, `f` and a `config.json` that solves for the target
/// from `f` with `a = 1`.
fn emit(dir: &OutDir, out_path: &Path, cfg: &LoadedConfig) -> Result<()> {
    let wanted = cfg.config.manufactured.as_ref().expect("checked on load");
    let grid = cfg.grid()?;
    let s = cfg.s_field(&grid)?;
    let made = manufacture(&wanted.target, &s, cfg.config.k, cfg.sign())?;
    write_field(&dir.path("target"), &made.target, FieldFormat::Binary)?;
    write_field(&dir.path("f"), &made.f, FieldFormat::Binary)?;
    let mut emitted = cfg.config.clone();
    emitted.manufactured = None;
    emitted.psi.f = Some(FieldSource::File(PathBuf::from("f.json")));
    emitted.reference = Some(PathBuf::from("target.json"));
    emitted.output = out_path.join("solve");
    dir.write_json("config.json", &emitted)?;
    println!(
        "f in [{:.6e}, {:.6e}]; config written to {}",
        made.f.min(),
        made.f.max(),
        dir.path("config.json").display()
    );
    Ok(())
}

pub fn run(config: &Path, out: Option<&Path>) -> u8 {
    let cfg = match load(config) {
        Ok(c) => c,
        Err(e) => return fail_early(out, &e),
    };
    let out_path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| cfg.config.output.clone());
    let dir = match OutDir::create(&out_path) {
        Ok(d) => d,
        Err(e) => return fail(None, &e),
    };
    match dir
        .remove("error.json")
        .and_then(|_| emit(&dir, &out_path, &cfg))
    {
        Ok(()) => exit::OK,
        Err(e) => fail(Some(&dir), &e),
    }
}
