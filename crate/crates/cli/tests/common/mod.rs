#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn sigmak(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_sigmak"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn write_config(dir: &Path, name: &str, cfg: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    p
}

pub fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

pub fn read_jsonl(p: &Path) -> Vec<Value> {
    fs::read_to_string(p)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Constant data `S = 2 I`, `f = 1`, `a = 1`, `k = n = 2`; the solution is `ln 2`.
pub fn constant_config(n: usize) -> Value {
    serde_json::json!({
        "dimension": 2,
        "k": 2,
        "sizes": [n, n],
        "s": { "diagonal": [2.0, 2.0] },
        "psi": { "f": { "catalog": { "shape": "constant", "base": 1.0, "amplitude": 0.0 } }, "a": 1.0 }
    })
}

pub fn manufactured_config(n: usize, amplitude: f64, refinement: &[usize]) -> Value {
    serde_json::json!({
        "dimension": 2,
        "k": 2,
        "sizes": [n, n],
        "s": { "diagonal": [2.0, 2.0] },
        "psi": { "a": 1.0 },
        "manufactured": {
            "target": { "shape": "sin_x_cos_y", "base": 0.0, "amplitude": amplitude },
            "refinement": refinement
        }
    })
}

/// Determinant equation `det^{1/2}(...) = f e^{-2u}` with `S = c I`.
pub fn fixed_point_config(n: usize, c: f64, eps: f64, f_amp: f64) -> Value {
    serde_json::json!({
        "dimension": 2,
        "k": 2,
        "sizes": [n, n],
        "lengths": [2.0, 2.0],
        "s": { "perturbed_identity": { "c": c, "eps": eps, "shape": "cos_x_cos_y" } },
        "psi": { "f": { "catalog": { "shape": "sin_x_cos_y", "base": 1.0, "amplitude": f_amp } }, "a": -2.0 },
        "variant": "determinant-fixed-point"
    })
}
