//! Run configuration: one JSON document, validated before any computation.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sigmak::geometry::io::read_field;
use sigmak::pde::catalog::{CatalogFn, Shape};
use sigmak::{
    Error, GridField, Problem, PsiSpec, Result, Sign, SolverOptions, SymMat, TensorField, TorusGrid,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dimension: usize,
    pub k: usize,
    pub sizes: Vec<usize>,
    /// Period per axis; `2 pi` each when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<f64>>,
    pub s: SSpec,
    pub psi: PsiConfig,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default)]
    pub solver: SolverOverrides,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Homotopy levels of the fixed-point variant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_schedule: Option<Vec<f64>>,
    /// Acknowledges that the negative-cone variant may not converge.
    #[serde(default)]
    pub experimental: bool,
    /// Known solution to report errors against (a field header path).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manufactured: Option<ManufacturedSpec>,
}

fn default_seed() -> u64 {
    42
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// Background tensor `S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SSpec {
    /// Constant diagonal matrix.
    Diagonal(Vec<f64>),
    /// Constant symmetric matrix given by rows.
    Matrix(Vec<Vec<f64>>),
    /// `(c + eps * shape(x)) I`.
    PerturbedIdentity { c: f64, eps: f64, shape: Shape },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSource {
    Catalog(CatalogFn),
    /// Field header written by this tool, relative to the config file.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiConfig {
    /// `f` in `psi = f e^{a u}`; may be omitted for manufactured runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<FieldSource>,
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Continuation from `t = 0` for the positive-cone equation.
    #[default]
    Standard,
    /// The sign-flipped operator; needs `experimental`.
    NegativeExperimental,
    /// `det^{1/n}(...) = f e^{a <u>}` with `a < 0`, `k = n`.
    DeterminantNormalized,
    /// `det^{1/n}(...) = f e^{-2u}` by fixed-point iteration, `k = n`.
    DeterminantFixedPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManufacturedSpec {
    pub target: CatalogFn,
    /// Square grid sizes for the error-vs-h table.
    #[serde(default)]
    pub refinement: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_newton_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line_search_shrink: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_initial: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_max_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gmres_restart: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_point_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_fixed_point_iters: Option<usize>,
}

impl SolverOverrides {
    pub fn apply(&self) -> Result<SolverOptions<f64>> {
        let d = SolverOptions::<f64>::default();
        let o = SolverOptions {
            residual_tol: self.residual_tol.unwrap_or(d.residual_tol),
            max_newton_iters: self.max_newton_iters.unwrap_or(d.max_newton_iters),
            line_search_shrink: self.line_search_shrink.unwrap_or(d.line_search_shrink),
            min_step: self.min_step.unwrap_or(d.min_step),
            dt_initial: self.dt_initial.unwrap_or(d.dt_initial),
            dt_min: self.dt_min.unwrap_or(d.dt_min),
            dt_max: self.dt_max.unwrap_or(d.dt_max),
            linear_tol: self.linear_tol.unwrap_or(d.linear_tol),
            linear_max_iters: self.linear_max_iters.or(d.linear_max_iters),
            gmres_restart: self.gmres_restart.unwrap_or(d.gmres_restart),
            fixed_point_tol: self.fixed_point_tol.unwrap_or(d.fixed_point_tol),
            max_fixed_point_iters: self
                .max_fixed_point_iters
                .unwrap_or(d.max_fixed_point_iters),
        };
        o.validate()?;
        Ok(o)
    }
}

/// A parsed config plus the directory its relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub base_dir: PathBuf,
}

impl LoadedConfig {
    /// Reads and validates a config; `experimental` ORs into the config's
    /// own acknowledgement flag.
    pub fn load(path: &Path, experimental: bool) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        let mut config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        config.experimental |= experimental;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let loaded = LoadedConfig { config, base_dir };
        loaded.validate()?;
        Ok(loaded)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Structural checks that need no numerics.
    pub fn validate(&self) -> Result<()> {
        let c = &self.config;
        let bad = |m: String| Err(Error::Format(m));
        if !(2..=3).contains(&c.dimension) {
            return bad(format!("dimension must be 2 or 3, got {}", c.dimension));
        }
        if c.sizes.len() != c.dimension {
            return bad("sizes must list one entry per axis".into());
        }
        if let Some(l) = &c.lengths {
            if l.len() != c.dimension {
                return bad("lengths must list one entry per axis".into());
            }
        }
        if !(1..=c.dimension).contains(&c.k) {
            return bad(format!("k must lie in 1..={}", c.dimension));
        }
        match c.variant {
            Variant::Standard => {
                if c.psi.a.is_nan() || c.psi.a <= 0.0 {
                    return bad("standard variant needs psi.a > 0".into());
                }
            }
            Variant::NegativeExperimental => {
                if !c.experimental {
                    return bad("negative-experimental variant needs \"experimental\": true or --experimental".into());
                }
                if c.psi.a.is_nan() || c.psi.a <= 0.0 {
                    return bad("negative-experimental variant needs psi.a > 0".into());
                }
            }
            Variant::DeterminantNormalized => {
                if c.k != c.dimension || c.psi.a.is_nan() || c.psi.a >= 0.0 {
                    return bad("determinant-normalized needs k = dimension and psi.a < 0".into());
                }
            }
            Variant::DeterminantFixedPoint => {
                if c.k != c.dimension || c.psi.a != -2.0 {
                    return bad("determinant-fixed-point needs k = dimension and psi.a = -2".into());
                }
            }
        }
        if c.t_schedule.is_some() && c.variant != Variant::DeterminantFixedPoint {
            return bad("t_schedule only applies to the determinant-fixed-point variant".into());
        }
        match (&c.psi.f, &c.manufactured) {
            (None, None) => {
                return bad("psi.f is required unless a manufactured target is given".into())
            }
            (Some(_), Some(_)) => return bad("give either psi.f or manufactured, not both".into()),
            _ => {}
        }
        if let Some(m) = &c.manufactured {
            if c.variant != Variant::Standard || c.psi.a != 1.0 {
                return bad("manufactured runs use the standard variant with psi.a = 1".into());
            }
            if m.refinement.iter().any(|&n| n < 8 || n % 2 == 1) {
                return bad("refinement sizes must be even and at least 8".into());
            }
        }
        c.solver.apply().map_err(|e| Error::Format(e.to_string()))?;
        Ok(())
    }

    pub fn sign(&self) -> Sign {
        match self.config.variant {
            Variant::NegativeExperimental => Sign::Negative,
            _ => Sign::Positive,
        }
    }

    pub fn grid(&self) -> Result<Arc<TorusGrid<f64>>> {
        self.grid_with_sizes(&self.config.sizes)
    }

    pub fn grid_with_sizes(&self, sizes: &[usize]) -> Result<Arc<TorusGrid<f64>>> {
        let lengths = self
            .config
            .lengths
            .clone()
            .unwrap_or_else(|| vec![std::f64::consts::TAU; self.config.dimension]);
        Ok(Arc::new(TorusGrid::new(sizes, &lengths)?))
    }

    pub fn s_field(&self, grid: &Arc<TorusGrid<f64>>) -> Result<TensorField<f64>> {
        let n = grid.dim();
        match &self.config.s {
            SSpec::Diagonal(d) => {
                if d.len() != n {
                    return Err(Error::Format("s.diagonal needs one entry per axis".into()));
                }
                TensorField::constant(grid.clone(), SymMat::from_diag(d))
            }
            SSpec::Matrix(rows) => {
                if rows.len() != n {
                    return Err(Error::Format(
                        "s.matrix must be dimension x dimension".into(),
                    ));
                }
                TensorField::constant(grid.clone(), SymMat::from_rows(rows)?)
            }
            SSpec::PerturbedIdentity { c, eps, shape } => {
                let f = CatalogFn::new(*shape, *c, *eps);
                TensorField::from_fn(grid.clone(), |x| {
                    SymMat::scaled_identity(n, f.value(grid, x))
                })
            }
        }
    }

    pub fn f_field(&self, grid: &Arc<TorusGrid<f64>>) -> Result<GridField<f64>> {
        match &self.config.psi.f {
            Some(FieldSource::Catalog(c)) => c.field(grid),
            Some(FieldSource::File(p)) => {
                let f: GridField<f64> = read_field(&self.resolve(p))?;
                if **f.grid() != **grid {
                    return Err(Error::Shape(
                        "psi.f file grid differs from the configured grid".into(),
                    ));
                }
                Ok(f)
            }
            None => Err(Error::Format("psi.f missing".into())),
        }
    }

    /// The configured problem on `grid` with the given `f`.
    pub fn problem(&self, grid: &Arc<TorusGrid<f64>>, f: GridField<f64>) -> Result<Problem<f64>> {
        let s = self.s_field(grid)?;
        Problem::new(
            self.config.k,
            s,
            PsiSpec::new(f, self.config.psi.a)?,
            self.sign(),
        )
    }

    pub fn t_schedule(&self) -> Vec<f64> {
        self.config
            .t_schedule
            .clone()
            .unwrap_or_else(|| vec![0.25, 0.5, 0.75, 1.0])
    }
}
