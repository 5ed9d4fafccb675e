use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use sigmak::estimates::{
    c0_bounds, diagnostics, verify_c0, verify_harnack, verify_v_convexity, C0Report,
    ConvexityReport, Diagnostics, HarnackReport,
};
use sigmak::geometry::io::{read_field, write_field, FieldFormat};
use sigmak::pde::{admissible_segment_test, manufacture, SegmentTest};
use sigmak::solver::{
    continuation_solve, continuation_solve_traced, fixed_point_solve_traced,
    solve_normalized_report, TraceRecord,
};
use sigmak::{
    ContinuationState, Error, GridField, NormalizedProblem, Problem, Result, SolverOptions,
    TorusGrid,
};

use super::{fail, fail_early};
use crate::config::{LoadedConfig, RunConfig, Variant};
use crate::output::{exit, ErrorRecord, OutDir};

/// C0 audit of every accepted continuation state against the path bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathAudit {
    pub pass: bool,
    pub states: usize,
    pub failures: usize,
    pub first_failure_t: Option<f64>,
    pub min_lower_margin: f64,
    pub min_upper_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub sup_error: f64,
    /// Previous row's error over this one.
    pub ratio: Option<f64>,
}

/// Everything known about a run; written even when the solver fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Audit {
    pub seed: u64,
    pub variant: Variant,
    pub status: &'static str,
    pub error: Option<ErrorRecord>,
    pub config: RunConfig,
    pub trace_len: usize,
    pub residual_sup: Option<f64>,
    /// `"field"`, or `"integral"` for the normalized variant, which bounds only `<u>`.
    pub c0_applies_to: Option<&'static str>,
    pub c0: Option<C0Report<f64>>,
    pub path_c0: Option<PathAudit>,
    pub diagnostics: Option<Diagnostics<f64>>,
    pub harnack: Option<HarnackReport<f64>>,
    pub v_convexity: Option<ConvexityReport<f64>>,
    /// Segment between the solution and the reference field.
    pub segment: Option<SegmentTest<f64>>,
    pub reference_error: Option<f64>,
    pub convergence: Option<Vec<ConvergenceRow>>,
    pub audits_pass: bool,
}

impl Audit {
    fn new(cfg: &RunConfig) -> Self {
        let mut config = cfg.clone();
        // the directory differs between otherwise identical runs
        config.output = Default::default();
        Audit {
            seed: cfg.seed,
            variant: cfg.variant,
            status: "failed",
            error: None,
            config,
            trace_len: 0,
            residual_sup: None,
            c0_applies_to: None,
            c0: None,
            path_c0: None,
            diagnostics: None,
            harnack: None,
            v_convexity: None,
            segment: None,
            reference_error: None,
            convergence: None,
            audits_pass: false,
        }
    }

    fn finish(&mut self) {
        self.status = "ok";
        self.audits_pass = self.c0.as_ref().is_none_or(|r| r.pass)
            && self.path_c0.as_ref().is_none_or(|r| r.pass)
            && self.harnack.as_ref().is_none_or(|r| r.pass || !r.feasible)
            && self.v_convexity.as_ref().is_none_or(|r| r.pass)
            && self.segment.as_ref().is_none_or(SegmentTest::passed);
    }
}

/// A primary-grid problem plus the reference solution, if any.
struct Setup {
    problem: Problem<f64>,
    reference: Option<GridField<f64>>,
}

fn setup(cfg: &LoadedConfig, grid: &Arc<TorusGrid<f64>>) -> Result<Setup> {
    match &cfg.config.manufactured {
        Some(m) => {
            let s = cfg.s_field(grid)?;
            let made = manufacture(&m.target, &s, cfg.config.k, cfg.sign())?;
            Ok(Setup {
                problem: cfg.problem(grid, made.f)?,
                reference: Some(made.target),
            })
        }
        None => {
            let reference = match &cfg.config.reference {
                Some(r) => {
                    let u: GridField<f64> = read_field(&cfg.resolve(r))?;
                    if **u.grid() != **grid {
                        return Err(Error::Shape(
                            "reference grid differs from the configured grid".into(),
                        ));
                    }
                    Some(u)
                }
                None => None,
            };
            Ok(Setup {
                problem: cfg.problem(grid, cfg.f_field(grid)?)?,
                reference,
            })
        }
    }
}

fn path_audit(states: &[ContinuationState<f64>], p: &Problem<f64>) -> Result<PathAudit> {
    let bounds = c0_bounds(p)?.path_bounds();
    let mut audit = PathAudit {
        pass: true,
        states: states.len(),
        failures: 0,
        first_failure_t: None,
        min_lower_margin: f64::INFINITY,
        min_upper_margin: f64::INFINITY,
    };
    for s in states {
        let r = verify_c0(&s.u, &bounds);
        audit.min_lower_margin = audit.min_lower_margin.min(r.lower_margin);
        audit.min_upper_margin = audit.min_upper_margin.min(r.upper_margin);
        if !r.pass {
            audit.pass = false;
            audit.failures += 1;
            audit.first_failure_t.get_or_insert(s.t);
        }
    }
    Ok(audit)
}

fn write_trace(dir: &OutDir, trace: &[TraceRecord<f64>]) -> Result<()> {
    dir.write_jsonl("trace.jsonl", trace).map(|_| ())
}

fn continuation_traces(
    states: &[ContinuationState<f64>],
    p: &Problem<f64>,
) -> Result<Vec<TraceRecord<f64>>> {
    states
        .iter()
        .map(|s| TraceRecord::from_state(s, p))
        .collect()
}

fn sup_distance(a: &GridField<f64>, b: &GridField<f64>) -> f64 {
    a.zip_map(b, |x, y| x - y).sup_norm()
}

/// Solves with continuation; the trace is written before any error returns.
fn solve_continuation(
    dir: &OutDir,
    p: &Problem<f64>,
    opts: &SolverOptions<f64>,
    audit: &mut Audit,
) -> Result<GridField<f64>> {
    let mut states = Vec::new();
    let result = continuation_solve_traced(p, opts, &mut states);
    audit.trace_len = states.len();
    write_trace(dir, &continuation_traces(&states, p)?)?;
    audit.path_c0 = Some(path_audit(&states, p)?);
    let u = result?;
    audit.residual_sup = states.last().map(|s| s.residual_sup);
    audit.c0_applies_to = Some("field");
    audit.c0 = Some(verify_c0(&u, &c0_bounds(p)?));
    Ok(u)
}

fn solve_normalized_variant(
    dir: &OutDir,
    p: &Problem<f64>,
    opts: &SolverOptions<f64>,
    audit: &mut Audit,
) -> Result<GridField<f64>> {
    let np = NormalizedProblem::new(p.s.clone(), -p.psi.a, 1.0)?;
    let result = solve_normalized_report(&np, 1.0, &p.psi.f, None, opts);
    let rep = match result {
        Ok(r) => r,
        Err(e) => {
            write_trace(dir, &[])?;
            return Err(e);
        }
    };
    let d = diagnostics(&rep.u, p)?;
    let record = TraceRecord {
        t: 1.0,
        dt: 0.0,
        newton_iters: rep.iterations,
        residual_sup: rep.residual_sup,
        u_min: rep.u.min(),
        u_max: rep.u.max(),
        sigma_km1_max: d.sigma_km1_max,
        hess_eig_max: d.hess_eig_max,
    };
    audit.trace_len = 1;
    write_trace(dir, &[record])?;
    audit.residual_sup = Some(rep.residual_sup);
    let mean = GridField::constant(rep.u.grid().clone(), rep.u.integral());
    audit.c0_applies_to = Some("integral");
    audit.c0 = Some(verify_c0(&mean, &c0_bounds(p)?));
    Ok(rep.u)
}

fn solve_fixed_point(
    dir: &OutDir,
    cfg: &LoadedConfig,
    p: &Problem<f64>,
    opts: &SolverOptions<f64>,
    audit: &mut Audit,
) -> Result<GridField<f64>> {
    let mut records = Vec::new();
    let result = fixed_point_solve_traced(p, &cfg.t_schedule(), opts, &mut records);
    audit.trace_len = records.len();
    let trace: Vec<TraceRecord<f64>> = records.iter().map(TraceRecord::from).collect();
    write_trace(dir, &trace)?;
    let u = result?;
    audit.residual_sup = Some(sigmak::pde::residual(&u, p, 1.0)?.sup_norm());
    audit.c0_applies_to = Some("field");
    audit.c0 = Some(verify_c0(&u, &c0_bounds(p)?));
    Ok(u)
}

fn refinement_table(
    cfg: &LoadedConfig,
    opts: &SolverOptions<f64>,
) -> Result<Option<Vec<ConvergenceRow>>> {
    let Some(m) = &cfg.config.manufactured else {
        return Ok(None);
    };
    if m.refinement.is_empty() {
        return Ok(None);
    }
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in &m.refinement {
        let grid = cfg.grid_with_sizes(&vec![n; cfg.config.dimension])?;
        let s = setup(cfg, &grid)?;
        let (u, _) = continuation_solve(&s.problem, opts)?;
        let err = sup_distance(
            &u,
            s.reference
                .as_ref()
                .expect("manufactured runs carry a target"),
        );
        let ratio = rows.last().map(|r| r.sup_error / err);
        rows.push(ConvergenceRow {
            n,
            h: grid.spacing()[0],
            sup_error: err,
            ratio,
        });
    }
    Ok(Some(rows))
}

fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from("n,h,sup_error,ratio\n");
    for r in rows {
        let ratio = r.ratio.map(|x| x.to_string()).unwrap_or_default();
        s.push_str(&format!("{},{},{},{}\n", r.n, r.h, r.sup_error, ratio));
    }
    s
}

fn solve_into(dir: &OutDir, cfg: &LoadedConfig, audit: &mut Audit) -> Result<()> {
    let opts = cfg.config.solver.apply()?;
    let grid = cfg.grid()?;
    let Setup {
        problem: p,
        reference,
    } = setup(cfg, &grid)?;
    let u = match cfg.config.variant {
        Variant::Standard | Variant::NegativeExperimental => {
            solve_continuation(dir, &p, &opts, audit)?
        }
        Variant::DeterminantNormalized => solve_normalized_variant(dir, &p, &opts, audit)?,
        Variant::DeterminantFixedPoint => solve_fixed_point(dir, cfg, &p, &opts, audit)?,
    };
    write_field(&dir.path("solution"), &u, FieldFormat::Binary)?;
    audit.diagnostics = Some(diagnostics(&u, &p)?);
    if matches!(
        cfg.config.variant,
        Variant::DeterminantNormalized | Variant::DeterminantFixedPoint
    ) {
        audit.harnack = Some(verify_harnack(&u, &p.s, grid.flat_diameter()));
        audit.v_convexity = Some(verify_v_convexity(&u, &p.s)?);
    }
    if let Some(r) = &reference {
        audit.reference_error = Some(sup_distance(&u, r));
        if cfg.config.variant != Variant::DeterminantNormalized {
            audit.segment = Some(admissible_segment_test(
                &u.map(f64::exp),
                &r.map(f64::exp),
                &p,
                33,
            )?);
        }
    }
    if let Some(rows) = refinement_table(cfg, &opts)? {
        dir.write_text("convergence.csv", &convergence_csv(&rows))?;
        audit.convergence = Some(rows);
    }
    audit.finish();
    Ok(())
}

pub fn run(config: &Path, out: Option<&Path>, seed: Option<u64>, experimental: bool) -> u8 {
    let mut cfg = match LoadedConfig::load(config, experimental) {
        Ok(c) => c,
        Err(e) => return fail_early(out, &e),
    };
    if let Some(s) = seed {
        cfg.config.seed = s;
    }
    let out_path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| cfg.config.output.clone());
    let dir = match OutDir::create(&out_path) {
        Ok(d) => d,
        Err(e) => return fail_early(out, &e),
    };
    let mut audit = Audit::new(&cfg.config);
    let result = dir
        .remove("error.json")
        .and_then(|_| solve_into(&dir, &cfg, &mut audit));
    if let Err(e) = &result {
        audit.error = Some(ErrorRecord::from(e));
    }
    if let Err(e) = dir.write_json("audit.json", &audit) {
        return fail(Some(&dir), &e);
    }
    match result {
        Ok(()) => {
            println!(
                "solved: residual {:.3e}, {} trace records, audits {}",
                audit.residual_sup.unwrap_or(f64::NAN),
                audit.trace_len,
                if audit.audits_pass { "pass" } else { "FAIL" }
            );
            if let Some(rows) = &audit.convergence {
                for r in rows {
                    println!(
                        "  n {:>4}  error {:.4e}  ratio {}",
                        r.n,
                        r.sup_error,
                        r.ratio.map_or("-".into(), |x| format!("{x:.3}"))
                    );
                }
            }
            exit::OK
        }
        Err(e) => fail(Some(&dir), &e),
    }
}
