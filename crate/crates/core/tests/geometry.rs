use std::sync::Arc;

use proptest::prelude::*;
use sigmak::geometry::io::{read_field, write_field, FieldFormat};
use sigmak::geometry::{augmented_hessian, conformal_hessian, gradient, hessian};
use sigmak::symfunc::{in_cone, ConeSpec};
use sigmak::{GridField, Sign, SymMat, TensorField, TorusGrid};

fn grid(n: usize) -> Arc<TorusGrid<f64>> {
    Arc::new(TorusGrid::periodic_2pi(&[n, n]).unwrap())
}

/// Hessian of `h` in the metric `e^{-2u} g`, with the Christoffel symbols
/// built from central differences of the metric coefficient `e^{-2u}`.
fn christoffel_hessian(h: &GridField<f64>, u: &GridField<f64>) -> TensorField<f64> {
    let g = h.grid().clone();
    let d = g.dim();
    let conf = u.map(|v| (-2.0 * v).exp());
    let dconf = gradient(&conf);
    let dh = gradient(h);
    let hh = hessian(h);
    let mats = (0..h.len())
        .map(|p| {
            let c = conf.values()[p];
            let dc: Vec<f64> = (0..d).map(|a| dconf[a].values()[p]).collect();
            let mut m = *hh.at(p);
            for i in 0..d {
                for j in i..d {
                    // Gamma^l_ij = (d_i g_jl + d_j g_il - d_l g_ij) / (2 c)
                    let mut corr = 0.0;
                    for l in 0..d {
                        let dij = if i == j { 1.0 } else { 0.0 };
                        let gl = ((if j == l { dc[i] } else { 0.0 })
                            + (if i == l { dc[j] } else { 0.0 })
                            - dij * dc[l])
                            / (2.0 * c);
                        corr += gl * dh[l].values()[p];
                    }
                    m.set(i, j, m.get(i, j) - corr);
                }
            }
            m
        })
        .collect();
    TensorField::new(g, mats).unwrap()
}

#[test]
fn conformal_hessian_agrees_with_christoffel_route_at_second_order() {
    let discrepancy = |n: usize| {
        let g = grid(n);
        let u = GridField::from_fn(g.clone(), |x| {
            0.3 * x[0].sin() * x[1].cos() + 0.2 * x[1].sin()
        });
        let h = GridField::from_fn(g.clone(), |x| (x[0] + 2.0 * x[1]).cos() + 0.5 * x[0].sin());
        conformal_hessian(&h, &u)
            .unwrap()
            .sup_distance(&christoffel_hessian(&h, &u))
    };
    let e: Vec<f64> = [32, 64, 128].iter().map(|&n| discrepancy(n)).collect();
    for w in e.windows(2) {
        let r = w[0] / w[1];
        assert!((3.0..=5.0).contains(&r), "{e:?}");
    }
}

#[test]
fn augmented_hessian_small_bump_stays_admissible() {
    let g = grid(32);
    let s = TensorField::constant(g.clone(), SymMat::scaled_identity(2, 2.0)).unwrap();
    for eps in [0.02, 0.05, 0.1] {
        let u = GridField::from_fn(g.clone(), |x| eps * x[0].sin() * x[1].cos());
        let a = augmented_hessian(&u, &s, Sign::Positive).unwrap();
        assert!(a.mats().iter().all(|m| in_cone(m, &ConeSpec::positive(2))));
    }
    let zero = GridField::zeros(g.clone());
    assert_eq!(augmented_hessian(&zero, &s, Sign::Negative).unwrap(), s);
}

#[test]
fn hessian_of_sin_x() {
    let n = 64;
    let g = grid(n);
    let u = GridField::from_fn(g.clone(), |x| x[0].sin());
    let hs = hessian(&u);
    let h2 = (2.0 * std::f64::consts::PI / n as f64).powi(2);
    for i in 0..u.len() {
        let m = hs.at(i);
        assert!((m.get(0, 0) + u.values()[i]).abs() <= h2);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.get(0, 1), 0.0);
    }
}

#[test]
fn field_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = Arc::new(TorusGrid::new(&[8, 10, 12], &[1.0, 2.0, 3.5]).unwrap());
    let u = GridField::from_fn(g.clone(), |x: &[f64]| {
        (x[0] * 3.1).sin() + x[1] * x[2] / 7.0 + 1e-300
    });
    for (fmt, name) in [(FieldFormat::Binary, "b"), (FieldFormat::Csv, "c")] {
        let header = write_field(&dir.path().join(name), &u, fmt).unwrap();
        let back: GridField<f64> = read_field(&header).unwrap();
        assert_eq!(back, u);
    }
}

fn shift(u: &GridField<f64>, dx: usize, dy: usize) -> GridField<f64> {
    let g = u.grid().clone();
    let s = g.sizes().to_vec();
    let vals = (0..u.len())
        .map(|i| {
            let m = g.multi_index(i);
            u.values()[g.flat_index(&[(m[0] + dx) % s[0], (m[1] + dy) % s[1]])]
        })
        .collect();
    GridField::new(g, vals).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn operators_are_translation_equivariant(
        vals in prop::collection::vec(-1.0f64..1.0, 64),
        dx in 0usize..8,
        dy in 0usize..8,
    ) {
        let g = grid(8);
        let u = GridField::new(g.clone(), vals).unwrap();
        let us = shift(&u, dx, dy);
        let hu = hessian(&u);
        let hs = hessian(&us);
        for i in 0..u.len() {
            let m = g.multi_index(i);
            let j = g.flat_index(&[(m[0] + dx) % 8, (m[1] + dy) % 8]);
            prop_assert_eq!(hs.at(i), hu.at(j));
        }
    }

    #[test]
    fn operators_exact_on_constants(c in -5.0f64..5.0) {
        let g = grid(8);
        let u = GridField::constant(g.clone(), c);
        prop_assert!(gradient(&u).iter().all(|f| f.sup_norm() == 0.0));
        prop_assert!(hessian(&u).mats().iter().all(|m| m.frobenius() == 0.0));
    }
}
