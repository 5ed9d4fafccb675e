use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigmak::pde::catalog::{CatalogFn, Shape};
use sigmak::pde::{
    check_admissible, linearize, linearize_apply, manufacture, negative_residual, residual,
};
use sigmak::solver::newton_solve;
use sigmak::symfunc::{eigen_sym, newton_transform, sigma_mat};
use sigmak::{
    Error, GridField, Problem, PsiSpec, Sign, SolverOptions, SymMat, TensorField, TorusGrid,
};

fn grid(n: usize) -> Arc<TorusGrid<f64>> {
    Arc::new(TorusGrid::periodic_2pi(&[n, n]).unwrap())
}

fn const_problem(
    g: &Arc<TorusGrid<f64>>,
    k: usize,
    s: f64,
    f: f64,
    a: f64,
    sign: Sign,
) -> Problem<f64> {
    let st = TensorField::constant(g.clone(), SymMat::scaled_identity(g.dim(), s)).unwrap();
    let psi = PsiSpec::new(GridField::constant(g.clone(), f), a).unwrap();
    Problem::new(k, st, psi, sign).unwrap()
}

#[test]
fn residual_constant_examples() {
    let g = grid(16);
    let p = const_problem(&g, 2, 2.0, 1.0, 1.0, Sign::Positive);
    let r = residual(&GridField::constant(g.clone(), 2f64.ln()), &p, 1.0).unwrap();
    assert!(r.sup_norm() < 1e-12);
    let r = residual(&GridField::zeros(g.clone()), &p, 0.0).unwrap();
    assert_eq!(r.sup_norm(), 0.0);
    for c in [-0.3, 0.1, 0.9] {
        let r = residual(&GridField::constant(g.clone(), c), &p, 1.0).unwrap();
        assert!(r
            .values()
            .iter()
            .all(|&v| (v - (2.0 - c.exp())).abs() < 1e-14));
    }
}

#[test]
fn problem_rejects_bad_data() {
    let g = grid(8);
    let st = TensorField::constant(g.clone(), SymMat::from_diag(&[1.0, -2.0])).unwrap();
    let psi = PsiSpec::new(GridField::constant(g.clone(), 1.0), 1.0).unwrap();
    assert!(Problem::new(2, st.clone(), psi.clone(), Sign::Positive).is_err());
    assert!(Problem::new(1, st, psi, Sign::Positive).is_err());
    assert!(PsiSpec::new(GridField::constant(g.clone(), 0.0), 1.0).is_err());
    assert!(PsiSpec::new(GridField::constant(g, 1.0), 0.0).is_err());
}

#[test]
fn residual_reports_inadmissible_point() {
    let g = grid(16);
    let p = const_problem(&g, 2, 2.0, 1.0, 1.0, Sign::Positive);
    let u = GridField::from_fn(g.clone(), |x| 3.0 * x[0].sin());
    match residual(&u, &p, 1.0) {
        Err(Error::NotAdmissible { point: Some(_), .. }) => {}
        other => panic!("expected NotAdmissible, got {other:?}"),
    }
}

#[test]
fn linearization_on_laplacian_eigenfunction() {
    let n = 64;
    let g = grid(n);
    let (f, a) = (1.5, 0.7);
    let p = const_problem(&g, 1, 0.5, f, a, Sign::Positive);
    let u = GridField::zeros(g.clone());
    let h = GridField::from_fn(g.clone(), |x| x[0].sin());
    let l = linearize_apply(&u, &h, &p, 1.0).unwrap();
    let hh = (2.0 * std::f64::consts::PI / n as f64).powi(2);
    for (i, &v) in l.values().iter().enumerate() {
        let want = (-1.0 - a * f) * h.values()[i];
        assert!((v - want).abs() <= hh, "{v} vs {want}");
    }
    let zero = linearize_apply(&u, &GridField::zeros(g.clone()), &p, 1.0).unwrap();
    assert_eq!(zero.sup_norm(), 0.0);
}

fn smooth_random(g: &Arc<TorusGrid<f64>>, rng: &mut ChaCha8Rng, amp: f64) -> GridField<f64> {
    let c: Vec<f64> = (0..6).map(|_| rng.gen_range(-amp..amp)).collect();
    let ph: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..6.3)).collect();
    GridField::from_fn(g.clone(), |x| {
        c[0] + c[1] * (x[0] + ph[0]).sin()
            + c[2] * (x[1] + ph[1]).cos()
            + c[3] * (x[0] + x[1] + ph[2]).sin()
            + c[4] * (2.0 * x[0] - x[1] + ph[3]).cos()
            + c[5] * (x[0] + ph[4]).sin() * (x[1] + ph[5]).cos()
    })
}

fn fd_check(p: &Problem<f64>, seed: u64, amp: f64) {
    let g = p.grid.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = 1e-5;
    let mut done = 0;
    while done < 20 {
        let u = smooth_random(&g, &mut rng, amp);
        let h = smooth_random(&g, &mut rng, 1.0);
        if check_admissible(&u, p, 1.0).is_err() {
            continue;
        }
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let plus = residual(&u.axpy(eps, &h), p, t).unwrap();
            let minus = residual(&u.axpy(-eps, &h), p, t).unwrap();
            let fd = plus.zip_map(&minus, |a, b| (a - b) / (2.0 * eps));
            let lin = linearize_apply(&u, &h, p, t).unwrap();
            let err = fd.zip_map(&lin, |a, b| a - b).sup_norm();
            assert!(err <= 1e-6, "t = {t}: {err}");
            // assembled operator agrees with the conformal-Hessian route
            let op = linearize(&u, p, t).unwrap();
            let mut y = vec![0.0; h.len()];
            op.apply(h.values(), &mut y);
            let diff = y
                .iter()
                .zip(lin.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(diff <= 1e-10 * (1.0 + lin.sup_norm()), "{diff}");
        }
        done += 1;
    }
}

#[test]
fn linearization_matches_finite_differences() {
    let g = grid(24);
    fd_check(
        &const_problem(&g, 2, 2.0, 1.3, 1.0, Sign::Positive),
        1,
        0.05,
    );
    fd_check(&const_problem(&g, 1, 1.0, 0.8, 2.0, Sign::Positive), 2, 0.1);
    fd_check(
        &const_problem(&g, 2, 2.0, 1.0, 1.0, Sign::Negative),
        3,
        0.05,
    );
    let g3 = Arc::new(TorusGrid::periodic_2pi(&[8, 8, 8]).unwrap());
    fd_check(
        &const_problem(&g3, 2, 1.5, 1.0, 1.0, Sign::Positive),
        4,
        0.05,
    );
    fd_check(
        &const_problem(&g3, 3, 1.5, 1.0, 0.5, Sign::Positive),
        5,
        0.05,
    );
}

#[test]
fn coefficient_is_positive_definite_at_admissible_states() {
    let g = grid(16);
    let p = const_problem(&g, 2, 2.0, 1.0, 1.0, Sign::Positive);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let u = smooth_random(&g, &mut rng, 0.2);
        for t in [0.0, 0.5, 1.0] {
            if residual(&u, &p, t).is_err() {
                continue;
            }
            let op = linearize(&u, &p, t).unwrap();
            for c in op.coefficients() {
                assert!(eigen_sym(c).min() > 0.0);
            }
        }
    }
}

#[test]
fn coefficient_matches_newton_transform_formula() {
    let g = grid(8);
    let p = const_problem(&g, 2, 2.0, 1.0, 1.0, Sign::Positive);
    let u = GridField::zeros(g.clone());
    let t = 0.6;
    let op = linearize(&u, &p, t).unwrap();
    let a = SymMat::<f64>::scaled_identity(2, 2.0);
    let s2 = sigma_mat(&a, 2).unwrap();
    let want = newton_transform(&a, 1).unwrap() * (t / 2.0 * s2.powf(-0.5))
        + SymMat::scaled_identity(2, 1.0 - t);
    for c in op.coefficients() {
        assert!((*c - want).frobenius() < 1e-14);
    }
}

#[test]
fn negative_residual_examples() {
    let g = grid(16);
    let p = const_problem(&g, 2, 1.0, 1.0, 1.0, Sign::Negative);
    for c in [0.0, 0.2, -0.4] {
        let r = negative_residual(&GridField::constant(g.clone(), c), &p).unwrap();
        assert!(r
            .values()
            .iter()
            .all(|&v| (v - (1.0 - c.exp())).abs() < 1e-14));
    }
    let st = TensorField::constant(g.clone(), SymMat::from_diag(&[3.0, 0.5])).unwrap();
    let f = GridField::from_fn(g.clone(), |x| 1.0 + 0.5 * x[1].cos());
    let p2 = Problem::new(2, st, PsiSpec::new(f.clone(), 1.0).unwrap(), Sign::Negative).unwrap();
    let r = negative_residual(&GridField::zeros(g.clone()), &p2).unwrap();
    for (i, &v) in r.values().iter().enumerate() {
        assert!((v - (1.5f64.sqrt() - f.values()[i])).abs() < 1e-14);
    }
    // same as the blended residual at t = 1 on a gradient-free field
    let u = GridField::constant(g.clone(), 0.1);
    assert_eq!(
        negative_residual(&u, &p2).unwrap(),
        residual(&u, &p2, 1.0).unwrap()
    );
}

#[test]
fn manufactured_constant_target() {
    let g = grid(8);
    let s = TensorField::constant(g.clone(), SymMat::scaled_identity(2, 2.0)).unwrap();
    let m = manufacture(&CatalogFn::constant(0.3), &s, 2, Sign::Positive).unwrap();
    assert!(m
        .f
        .values()
        .iter()
        .all(|&v| (v - 2.0 * (-0.3f64).exp()).abs() < 1e-14));
    let big = CatalogFn::new(Shape::SinXCosY, 0.0, 10.0);
    assert!(matches!(
        manufacture(&big, &s, 2, Sign::Positive),
        Err(Error::NotAdmissible { .. })
    ));
}

#[test]
fn manufactured_solution_converges_at_second_order() {
    let target = CatalogFn::new(Shape::SinXCosY, 0.0, 0.1);
    let errs: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&n| {
            let g = grid(n);
            let s = TensorField::constant(g.clone(), SymMat::scaled_identity(2, 2.0)).unwrap();
            let m = manufacture(&target, &s, 2, Sign::Positive).unwrap();
            let p = Problem::new(2, s, PsiSpec::new(m.f, 1.0).unwrap(), Sign::Positive).unwrap();
            let u = newton_solve(
                &p,
                1.0,
                &GridField::zeros(g.clone()),
                &SolverOptions::default(),
            )
            .unwrap();
            u.zip_map(&m.target, |a, b| a - b).sup_norm()
        })
        .collect();
    let (r1, r2) = (errs[0] / errs[1], errs[1] / errs[2]);
    assert!(
        (3.0..=5.0).contains(&r1) && (3.0..=5.0).contains(&r2),
        "{errs:?}"
    );
}
