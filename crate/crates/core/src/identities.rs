//! Randomized audit of the algebraic identities behind the cone calculus:
//! Euler and trace identities of the Newton transformations, the derivative
//! formula for `sigma_k`, cone inclusions, concavity of `sigma_k^{1/k}`,
//! positivity of `T_{k-1}`, monotonicity, and an empirical eigenvalue
//! envelope on `{sigma_k >= 1, sigma_{k-1} <= 10}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::symfunc::{
    eigen_decompose, eigen_sym, in_cone, newton_transform, sigma_mat, sigma_mat_charpoly, ConeSpec,
    SymMat,
};

/// Deliberate defects for checking that the suite catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negates every Newton transformation the suite evaluates.
    FlipNewtonSign,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub k_min: usize,
    /// Largest `k`; each `n` uses `k_min..=min(k_max, n)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    /// Random matrices per `(n, k)` pair and identity.
    pub trials: usize,
    pub seed: u64,
    /// Total samples for the eigenvalue envelope, spread over the pairs.
    pub envelope_samples: usize,
    #[serde(skip)]
    pub fault: Option<Fault>,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig {
            n_min: 2,
            n_max: 6,
            k_min: 1,
            k_max: None,
            trials: 1000,
            seed: 42,
            envelope_samples: 100_000,
            fault: None,
        }
    }
}

/// Worst case of one identity over all samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub tolerance: f64,
    pub samples: usize,
    pub violations: usize,
    pub worst_error: f64,
    /// The matrix (or matrices) attaining `worst_error`, rows listed.
    pub worst_input: Vec<Vec<Vec<f64>>>,
    /// `(n, k)` at the worst sample.
    pub worst_nk: Option<(usize, usize)>,
}

impl IdentityCheck {
    fn new(name: &'static str, tolerance: f64) -> Self {
        IdentityCheck {
            name,
            tolerance,
            samples: 0,
            violations: 0,
            worst_error: 0.0,
            worst_input: Vec::new(),
            worst_nk: None,
        }
    }

    /// Records a sample whose normalized error must not exceed `tolerance`.
    fn record(&mut self, err: f64, nk: (usize, usize), input: &[&SymMat<f64>]) {
        let err = if err.is_nan() { f64::INFINITY } else { err };
        self.samples += 1;
        if err > self.tolerance {
            self.violations += 1;
        }
        if self.worst_nk.is_none() || err > self.worst_error {
            self.worst_error = err;
            self.worst_input = input.iter().map(|m| m.rows()).collect();
            self.worst_nk = Some(nk);
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeRow {
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    pub max_abs_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub config: IdentityConfig,
    pub checks: Vec<IdentityCheck>,
    pub envelope: Vec<EnvelopeRow>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
            && self
                .envelope
                .iter()
                .all(|r| r.max_abs_eigenvalue.is_finite())
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

fn random_sym(rng: &mut ChaCha8Rng, n: usize, r: f64) -> SymMat<f64> {
    let mut m = SymMat::zeros(n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, rng.gen_range(-r..=r));
        }
    }
    m
}

/// A random element of `Gamma_k^+`: a random symmetric matrix shifted
/// along the identity until it enters the cone.
fn random_in_cone(rng: &mut ChaCha8Rng, n: usize, k: usize) -> SymMat<f64> {
    let cone = ConeSpec::positive(k);
    loop {
        let b = random_sym(rng, n, 1.0);
        let c = rng.gen_range(0.0..2.0 * (n as f64).sqrt());
        let a = b + SymMat::identity(n) * c;
        if in_cone(&a, &cone) {
            return a;
        }
    }
}

fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> SymMat<f64> {
    let (_, q) = eigen_decompose(&random_sym(rng, n, 1.0));
    let d: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.3) {
                0.0
            } else {
                rng.gen_range(0.0..2.0)
            }
        })
        .collect();
    SymMat::from_eigen(&q, &d)
}

pub fn run_identity_suite(cfg: &IdentityConfig) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let newton = |a: &SymMat<f64>, q: usize| {
        let t = newton_transform(a, q).expect("order within range");
        match cfg.fault {
            Some(Fault::FlipNewtonSign) => -t,
            None => t,
        }
    };
    let mut euler = IdentityCheck::new("Euler identity", 1e-10);
    let mut trace = IdentityCheck::new("trace identity", 1e-10);
    let mut deriv = IdentityCheck::new("derivative identity", 1e-6);
    let mut routes = IdentityCheck::new("sigma route agreement", 1e-12);
    let mut inclusion = IdentityCheck::new("cone inclusion", 0.0);
    let mut concavity = IdentityCheck::new("concavity", 1e-10);
    let mut definite = IdentityCheck::new("T_{k-1} positive definite", 0.0);
    let mut monotone = IdentityCheck::new("monotonicity", 1e-10);
    let mut envelope = Vec::new();

    let pairs: Vec<(usize, usize)> = (cfg.n_min..=cfg.n_max)
        .flat_map(|n| (cfg.k_min.max(1)..=cfg.k_max.unwrap_or(n).min(n)).map(move |k| (n, k)))
        .collect();
    let env_pairs = pairs.iter().filter(|(_, k)| *k >= 2).count().max(1);
    let env_per_pair = if cfg.trials == 0 {
        0
    } else {
        cfg.envelope_samples / env_pairs
    };

    for &(n, k) in &pairs {
        let nk = (n, k);
        let kf = k as f64;
        for _ in 0..cfg.trials {
            // Euler and trace identities on unconstrained matrices
            let a = random_sym(&mut rng, n, 5.0);
            let sk = sigma_mat(&a, k).unwrap();
            let skm1 = sigma_mat(&a, k - 1).unwrap();
            let t = newton(&a, k - 1);
            euler.record(
                (t.contract(&a) - kf * sk).abs() / (1.0 + sk.abs()),
                nk,
                &[&a],
            );
            trace.record(
                (t.trace() - (n - k + 1) as f64 * skm1).abs() / (1.0 + skm1.abs()),
                nk,
                &[&a],
            );

            // d/dt sigma_k(A + tB) against T_{k-1} : B
            let a = random_sym(&mut rng, n, 1.0);
            let b = random_sym(&mut rng, n, 1.0);
            let b = b * (1.0 / b.frobenius().max(f64::MIN_POSITIVE));
            let h = 1e-5;
            let fd = (sigma_mat(&(a + b * h), k).unwrap() - sigma_mat(&(a - b * h), k).unwrap())
                / (2.0 * h);
            deriv.record((fd - newton(&a, k - 1).contract(&b)).abs(), nk, &[&a, &b]);

            // eigenvalue and characteristic-polynomial routes, known spectrum
            let (_, q) = eigen_decompose(&random_sym(&mut rng, n, 1.0));
            let lam: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..3.0)).collect();
            let m = SymMat::from_eigen(&q, &lam);
            let exact = crate::symfunc::sigma(&lam, k).unwrap();
            let e1 = (sigma_mat(&m, k).unwrap() - exact).abs() / exact.abs();
            let e2 = (sigma_mat_charpoly(&m, k).unwrap() - exact).abs() / exact.abs();
            routes.record(e1.max(e2), nk, &[&m]);

            // cone inclusion Gamma_k^+ within Gamma_{k-1}^+
            let a = random_sym(&mut rng, n, 1.0) + SymMat::identity(n) * rng.gen_range(-0.5..1.5);
            if k >= 2 && in_cone(&a, &ConeSpec::positive(k)) {
                let lower = in_cone(&a, &ConeSpec::positive(k - 1));
                inclusion.record(if lower { 0.0 } else { 1.0 }, nk, &[&a]);
            }

            let a = random_in_cone(&mut rng, n, k);
            let b = random_in_cone(&mut rng, n, k);
            let root = |m: &SymMat<f64>| sigma_mat(m, k).unwrap().powf(1.0 / kf);
            let (ra, rb) = (root(&a), root(&b));
            let mut worst: f64 = 0.0;
            for j in 0..=10 {
                let s = j as f64 / 10.0;
                let mid = a * (1.0 - s) + b * s;
                let gap = (1.0 - s) * ra + s * rb - root(&mid);
                worst = worst.max(gap);
            }
            concavity.record(worst, nk, &[&a, &b]);

            let min_eig = eigen_sym(&newton(&a, k - 1)).min();
            definite.record(
                if min_eig > 0.0 {
                    0.0
                } else {
                    1.0 + min_eig.abs()
                },
                nk,
                &[&a],
            );

            let p = random_psd(&mut rng, n);
            let pb = p + b;
            if in_cone(&pb, &ConeSpec::positive(k)) {
                let drop = sigma_mat(&b, k).unwrap() - sigma_mat(&pb, k).unwrap();
                monotone.record(drop.max(0.0), nk, &[&p, &b]);
            }
        }

        if k >= 2 && env_per_pair > 0 {
            let mut max_abs: f64 = 0.0;
            let mut got = 0;
            while got < env_per_pair {
                let a = random_in_cone(&mut rng, n, k);
                let target = rng.gen_range(1.0..4.0);
                let c = (target / sigma_mat(&a, k).unwrap()).powf(1.0 / kf);
                let a = a * c;
                if sigma_mat(&a, k - 1).unwrap() > 10.0 || sigma_mat(&a, k).unwrap() < 1.0 {
                    continue;
                }
                let e = eigen_sym(&a);
                max_abs = max_abs.max(e.max().abs()).max(e.min().abs());
                got += 1;
            }
            envelope.push(EnvelopeRow {
                n,
                k,
                samples: got,
                max_abs_eigenvalue: max_abs,
            });
        }
    }

    IdentityReport {
        config: cfg.clone(),
        checks: vec![
            euler, trace, deriv, routes, inclusion, concavity, definite, monotone,
        ],
        envelope,
    }
}
