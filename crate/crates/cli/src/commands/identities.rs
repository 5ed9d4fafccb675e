use std::path::PathBuf;

use serde::Serialize;
use sigmak::identities::{run_identity_suite, Fault, IdentityConfig};

use super::fail;
use crate::output::{exit, OutDir};

pub struct Args {
    pub seed: u64,
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub k_min: usize,
    pub k_max: Option<usize>,
    pub out: PathBuf,
    pub flip_newton_sign: bool,
}

#[derive(Serialize)]
struct Line<'a, T> {
    record: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

pub fn run(args: &Args) -> u8 {
    if args.n_min < 1 || args.n_min > args.n_max {
        return fail(
            None,
            &sigmak::Error::Format("need 1 <= n-min <= n-max".into()),
        );
    }
    let cfg = IdentityConfig {
        n_min: args.n_min,
        n_max: args.n_max,
        k_min: args.k_min,
        k_max: args.k_max,
        trials: args.trials,
        seed: args.seed,
        fault: args.flip_newton_sign.then_some(Fault::FlipNewtonSign),
        ..IdentityConfig::default()
    };
    let dir = match OutDir::create(&args.out) {
        Ok(d) => d,
        Err(e) => return fail(None, &e),
    };
    let report = run_identity_suite(&cfg);
    let mut lines = Vec::new();
    lines.push(serde_json::to_value(Line {
        record: "config",
        body: &report.config,
    }));
    for c in &report.checks {
        lines.push(serde_json::to_value(Line {
            record: "check",
            body: c,
        }));
    }
    for r in &report.envelope {
        lines.push(serde_json::to_value(Line {
            record: "envelope",
            body: r,
        }));
    }
    let lines: Result<Vec<_>, _> = lines.into_iter().collect();
    let written = lines
        .map_err(sigmak::Error::from)
        .and_then(|l| dir.write_jsonl("identities.jsonl", l));
    if let Err(e) = written {
        return fail(Some(&dir), &e);
    }
    for c in &report.checks {
        println!(
            "{:<4} {:<28} samples {:>7}  worst {:.3e}  tol {:.0e}",
            if c.passed() { "ok" } else { "FAIL" },
            c.name,
            c.samples,
            c.worst_error,
            c.tolerance
        );
    }
    if report.passed() {
        exit::OK
    } else {
        for c in report.failures() {
            let matrices = serde_json::to_string(&c.worst_input).unwrap_or_default();
            eprintln!(
                "violation: {} ({} of {} samples, worst error {:e} at n,k = {:?}); matrix {}",
                c.name, c.violations, c.samples, c.worst_error, c.worst_nk, matrices
            );
        }
        exit::VIOLATION
    }
}
