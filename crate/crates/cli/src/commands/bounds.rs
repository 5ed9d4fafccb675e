use std::path::Path;

use serde::Serialize;
use sigmak::estimates::{c0_bounds, harnack_gap, lambda_max, phi_constants, PhiCheck};
use sigmak::pde::manufacture;
use sigmak::{C0Bounds, Error, PhiConstants, PhiMode, Result, Sign};

use super::{fail, fail_early};
use crate::config::LoadedConfig;
use crate::output::{exit, OutDir};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnackSummary {
    pub diameter: f64,
    pub lambda_max: f64,
    /// `lambda_max D^2`; feasible below `pi^2/2`.
    pub product: f64,
    pub feasible: bool,
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub seed: u64,
    pub c0: C0Bounds<f64>,
    pub phi: PhiConstants<f64>,
    pub phi_check: PhiCheck<f64>,
    pub harnack: HarnackSummary,
}

pub const PHI_SAMPLES: usize = 10_000;

pub fn bounds_report(cfg: &LoadedConfig) -> Result<BoundsReport> {
    let grid = cfg.grid()?;
    let f = match &cfg.config.manufactured {
        Some(m) => manufacture(&m.target, &cfg.s_field(&grid)?, cfg.config.k, cfg.sign())?.f,
        None => cfg.f_field(&grid)?,
    };
    let p = cfg.problem(&grid, f)?;
    let c0 = c0_bounds(&p)?;
    let mode = match p.sign {
        Sign::Positive => PhiMode::Positive,
        Sign::Negative => PhiMode::Negative,
    };
    let phi = phi_constants(&c0, mode);
    let diameter = grid.flat_diameter();
    let lam = lambda_max(&p.s);
    let gap = match harnack_gap(&p.s, diameter) {
        Ok(g) => Some(g),
        Err(Error::HarnackInfeasible { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(BoundsReport {
        seed: cfg.config.seed,
        c0,
        phi,
        phi_check: phi.verify(&c0, PHI_SAMPLES),
        harnack: HarnackSummary {
            diameter,
            lambda_max: lam,
            product: lam * diameter * diameter,
            feasible: gap.is_some(),
            gap,
        },
    })
}

pub fn run(config: &Path, out: Option<&Path>) -> u8 {
    let cfg = match LoadedConfig::load(config, false) {
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
    let report = match bounds_report(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(Some(&dir), &e),
    };
    if let Err(e) = dir.write_json("bounds.json", &report) {
        return fail(Some(&dir), &e);
    }
    println!(
        "c0 [{:.6}, {:.6}] ({:?}); harnack {}",
        report.c0.lower,
        report.c0.upper,
        report.c0.kind,
        match report.harnack.gap {
            Some(g) => format!("gap {g:.6}"),
            None => "infeasible".into(),
        }
    );
    exit::OK
}
