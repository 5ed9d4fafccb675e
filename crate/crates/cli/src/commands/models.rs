use std::f64::consts::PI;
use std::path::Path;

use sigmak::geometry::{model_schouten, ModelGeometry, ModelKind};

use super::fail;
use crate::output::{exit, OutDir};

/// The model spaces reported by `models`, in table order.
pub fn model_list() -> Vec<ModelKind> {
    (3..=8)
        .map(ModelKind::Sphere)
        .chain((3..=8).map(ModelKind::RealProjective))
        .chain((2..=4).map(ModelKind::ComplexProjective))
        .collect()
}

/// CSV table of curvature constants and `lambda_max(A) D^2` with the
/// feasibility flag `invariant < pi^2/2`.
pub fn models_csv() -> String {
    let mut s = String::from(
        "model,real_dim,ricci_multiple,scalar_curvature,diameter,schouten_multiple,invariant,feasible\n",
    );
    for kind in model_list() {
        let m = ModelGeometry::<f64>::new(kind);
        let sch = model_schouten(&m).expect("listed models have dimension >= 3");
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            kind.label(),
            kind.real_dim(),
            m.ricci_multiple,
            m.scalar_curv,
            m.diameter,
            sch.schouten_multiple,
            sch.invariant,
            sch.invariant < PI * PI / 2.0
        ));
    }
    s
}

pub fn run(out: Option<&Path>) -> u8 {
    let csv = models_csv();
    print!("{csv}");
    if let Some(out) = out {
        let written = OutDir::create(out).and_then(|d| d.write_text("models.csv", &csv));
        if let Err(e) = written {
            return fail(None, &e);
        }
    }
    exit::OK
}
