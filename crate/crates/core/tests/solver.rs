use std::sync::Arc;
use std::time::Instant;

use sigmak::estimates::{c0_bounds, verify_c0, verify_harnack, verify_v_convexity};
use sigmak::pde::{admissible_segment_test, check_admissible, residual};
use sigmak::solver::{
    continuation_resume, continuation_solve, fixed_point_solve, newton_solve, solve_normalized,
};
use sigmak::{
    GridField, NormalizedProblem, Problem, PsiSpec, Sign, SolverOptions, SymMat, TensorField,
    TorusGrid,
};

fn grid(n: usize) -> Arc<TorusGrid<f64>> {
    Arc::new(TorusGrid::periodic_2pi(&[n, n]).unwrap())
}

fn problem(
    g: &Arc<TorusGrid<f64>>,
    k: usize,
    s: f64,
    f: impl Fn(&[f64]) -> f64,
    a: f64,
) -> Problem<f64> {
    let st = TensorField::constant(g.clone(), SymMat::scaled_identity(g.dim(), s)).unwrap();
    let psi = PsiSpec::new(GridField::from_fn(g.clone(), f), a).unwrap();
    Problem::new(k, st, psi, Sign::Positive).unwrap()
}

#[test]
fn newton_at_t0_returns_zero() {
    let g = grid(16);
    let p = problem(&g, 2, 2.0, |x| 1.0 + 0.2 * x[0].sin(), 1.0);
    let u0 = GridField::constant(g.clone(), 0.3);
    let u = newton_solve(&p, 0.0, &u0, &SolverOptions::default()).unwrap();
    assert!(u.sup_norm() < 1e-8);
}

#[test]
fn newton_finds_constant_solution() {
    let g = grid(16);
    let p = problem(&g, 2, 2.0, |_| 1.0, 1.0);
    let u = newton_solve(
        &p,
        1.0,
        &GridField::zeros(g.clone()),
        &SolverOptions::default(),
    )
    .unwrap();
    let err = u.map(|v| v - 2f64.ln()).sup_norm();
    assert!(err < 1e-6, "{err}");
}

#[test]
fn continuation_constant_problem_64() {
    let g = grid(64);
    let p = problem(&g, 2, 2.0, |_| 1.0, 1.0);
    let start = Instant::now();
    let (u, trace) = continuation_solve(&p, &SolverOptions::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let err = u.map(|v| v - 2f64.ln()).sup_norm();
    assert!(err < 1e-6, "{err}");
    assert!(secs < 10.0, "{secs}");
    for s in &trace {
        assert!(s.u.max() - s.u.min() < 1e-10);
    }
}

#[test]
fn continuation_perturbed_problem_stays_in_bounds() {
    let g = grid(32);
    let p = problem(&g, 2, 2.0, |x| 1.0 + 0.2 * x[0].sin() * x[1].cos(), 1.0);
    let (u, trace) = continuation_solve(&p, &SolverOptions::default()).unwrap();
    let b = c0_bounds(&p).unwrap();
    assert!(verify_c0(&u, &b).pass);
    assert!(b.lower >= (2.0f64 / 1.2).ln() - 1e-6 - 1e-12);
    assert!(b.upper <= (2.0f64 / 0.8).ln() + 1e-6 + 1e-12);
    let pb = b.path_bounds();
    for s in &trace {
        assert!(verify_c0(&s.u, &pb).pass, "t = {}", s.t);
        check_admissible(&s.u, &p, s.t).unwrap();
    }
    // resuming from a middle state reproduces the tail exactly
    let mid = trace.len() / 2;
    let mut tail = Vec::new();
    let u2 = continuation_resume(&p, &trace[mid], &SolverOptions::default(), &mut tail).unwrap();
    assert_eq!(u2, u);
    assert_eq!(&tail[..], &trace[mid + 1..]);
}

#[test]
fn k1_path_matches_direct_solve() {
    let g = grid(32);
    let p = problem(&g, 1, 2.0, |x| 1.0 + 0.3 * x[1].cos(), 1.0);
    let opts = SolverOptions {
        residual_tol: 1e-11,
        ..SolverOptions::default()
    };
    let (u, _) = continuation_solve(&p, &opts).unwrap();
    let direct = newton_solve(&p, 1.0, &GridField::zeros(g.clone()), &opts).unwrap();
    let diff = u.zip_map(&direct, |a, b| a - b).sup_norm();
    assert!(diff < 1e-9, "{diff}");
}

#[test]
fn segment_between_solutions_is_admissible() {
    let g = grid(32);
    let p1 = problem(&g, 2, 2.0, |x| 1.0 + 0.2 * x[0].sin() * x[1].cos(), 1.0);
    let (u1, _) = continuation_solve(&p1, &SolverOptions::default()).unwrap();
    let u0 = GridField::constant(g.clone(), 2f64.ln());
    let t = admissible_segment_test(&u0.map(f64::exp), &u1.map(f64::exp), &p1, 33).unwrap();
    assert!(t.passed());
    let big = GridField::from_fn(g.clone(), |x| 3.0 * x[0].sin());
    let t = admissible_segment_test(&u0.map(f64::exp), &big.map(f64::exp), &p1, 33).unwrap();
    assert!(!t.passed());
}

#[test]
fn normalized_identity_data() {
    let g = grid(16);
    let s = TensorField::constant(g.clone(), SymMat::identity(2)).unwrap();
    let np = NormalizedProblem::new(s, 1.0, 1.0).unwrap();
    let one = GridField::constant(g.clone(), 1.0);
    for t in [0.0, 1.0] {
        let u = solve_normalized(&np, t, &one, None, &SolverOptions::default()).unwrap();
        assert!(u.sup_norm() < 1e-9, "t = {t}: {}", u.sup_norm());
    }
}

#[test]
fn normalized_perturbed_rhs_satisfies_min_point_inequality() {
    let g = grid(32);
    let s = TensorField::constant(g.clone(), SymMat::identity(2)).unwrap();
    let np = NormalizedProblem::new(s, 1.0, 1.0).unwrap();
    let f = GridField::from_fn(g.clone(), |x| 1.0 + 0.1 * x[0].sin());
    let u = solve_normalized(&np, 1.0, &f, None, &SolverOptions::default()).unwrap();
    let mean = u.integral();
    let q = u.argmin();
    // det^{1/n}(S) = 1 <= f(q) e^{-<u>}
    assert!(1.0 <= f.values()[q] * (-mean).exp() + 1e-9);
    assert!(u.max() - u.min() > 1e-4);
}

#[test]
fn fixed_point_constant_data() {
    let g = grid(16);
    let c = 0.2;
    let p = problem(&g, 2, c, |_| 1.0, -2.0);
    let u = fixed_point_solve(&p, &[0.5, 1.0], &SolverOptions::default()).unwrap();
    let err = u.map(|v| v + 0.5 * c.ln()).sup_norm();
    assert!(err < 1e-6, "{err}");
}

#[test]
fn fixed_point_perturbed_passes_audits() {
    let g = Arc::new(TorusGrid::new(&[32, 32], &[2.0, 2.0]).unwrap());
    let st = TensorField::from_fn(g.clone(), |x| {
        let w = 0.2 * (std::f64::consts::PI * x[0]).sin();
        SymMat::from_rows(&[vec![2.0 + w, 0.1 * w], vec![0.1 * w, 2.0 - w]]).unwrap()
    })
    .unwrap();
    let psi = PsiSpec::new(GridField::constant(g.clone(), 1.0), -2.0).unwrap();
    let p = Problem::new(2, st.clone(), psi, Sign::Positive).unwrap();
    let u = fixed_point_solve(&p, &[0.25, 0.5, 0.75, 1.0], &SolverOptions::default()).unwrap();
    let h = verify_harnack(&u, &st, g.flat_diameter());
    assert!(h.pass, "{h:?}");
    assert!(verify_v_convexity(&u, &st).unwrap().pass);
    let b = c0_bounds(&p).unwrap();
    assert!(verify_c0(&u, &b).pass);
    // the recentred field solves the unnormalized equation on the grid
    let r = residual(&u, &p, 1.0).unwrap().sup_norm();
    assert!(r < 1e-7, "{r}");
}

#[test]
fn single_precision_constant_solve() {
    let g = Arc::new(TorusGrid::<f32>::periodic_2pi(&[16, 16]).unwrap());
    let s = TensorField::constant(g.clone(), SymMat::scaled_identity(2, 2.0f32)).unwrap();
    let psi = PsiSpec::new(GridField::constant(g.clone(), 1.0f32), 1.0).unwrap();
    let p = Problem::new(2, s, psi, Sign::Positive).unwrap();
    let opts = SolverOptions::<f32> {
        residual_tol: 1e-5,
        linear_tol: 1e-6,
        ..SolverOptions::default()
    };
    let (u, _) = continuation_solve(&p, &opts).unwrap();
    let err = u.map(|v| v - 2f32.ln()).sup_norm();
    assert!(err < 1e-4, "{err}");
}
