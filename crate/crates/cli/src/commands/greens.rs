use elastab::greens::{
    default_xi_grid, fourier_multiplier_norm, verify_lattice_batch, Lattice, Medium, SmoothSource, WaveNumbers,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Outcome;
use crate::output::to_value;
use crate::CliError;

fn one() -> f64 {
    1.0
}

fn default_kappas() -> Vec<f64> {
    vec![0.5, 1.0, 2.0, 4.0]
}

fn default_sources() -> usize {
    20
}

fn default_n() -> usize {
    26
}

fn default_n_check() -> Option<usize> {
    Some(20)
}

fn default_xi_points() -> usize {
    4001
}

fn default_tol() -> f64 {
    1e-8
}

/// Relative tolerance of the two-lattice comparison and of the scalar bound.
pub const TWO_GRID_TOL: f64 = 0.02;
pub const SCALAR_TOL: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierCase {
    pub k_s: f64,
    pub lambda_over_mu: f64,
    #[serde(default = "one")]
    pub ell: f64,
}

fn default_fourier() -> Vec<FourierCase> {
    let mut out = Vec::new();
    for (k_s, ell) in [(0.5, 1.0), (1.0, 1.0), (2.0, 0.5), (4.0, 1.0)] {
        for ratio in [0.0, 1.0, 1e3] {
            if out.len() < 10 {
                out.push(FourierCase { k_s, lambda_over_mu: ratio, ell });
            }
        }
    }
    out
}

/// `greens-verify` configuration: homogeneous 3D medium, smooth random
/// sources on `B_ell`, lattice quadrature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreensConfig {
    #[serde(default = "one")]
    pub rho: f64,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default = "one")]
    pub lambda_over_mu: f64,
    #[serde(default = "one")]
    pub ell: f64,
    #[serde(default = "default_kappas")]
    pub kappas: Vec<f64>,
    #[serde(default = "default_sources")]
    pub sources: usize,
    /// Lattice points per axis.
    #[serde(default = "default_n")]
    pub n: usize,
    /// Second lattice for the self-consistency check; `null` skips it.
    #[serde(default = "default_n_check")]
    pub n_check: Option<usize>,
    /// Source modulation wave number relative to `k_s`.
    #[serde(default = "one")]
    pub source_wave: f64,
    #[serde(default = "default_fourier")]
    pub fourier: Vec<FourierCase>,
    #[serde(default = "default_xi_points")]
    pub xi_points: usize,
    #[serde(default = "default_tol")]
    pub fourier_tol: f64,
    #[serde(default)]
    pub seed: u64,
}

impl Default for GreensConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SourceRow {
    pub kappa_s: f64,
    pub omega: f64,
    pub source: usize,
    pub n: usize,
    pub ratio: f64,
    pub bound: f64,
    pub slack: f64,
    pub scalar_ratio: f64,
    pub scalar_bound: f64,
    pub ratio_check: Option<f64>,
    pub two_grid_delta: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourierRow {
    pub k_s: f64,
    pub k_p: f64,
    pub ell: f64,
    pub lambda_over_mu: f64,
    pub multiplier_norm: f64,
    pub bound: f64,
    pub pass: bool,
}

impl GreensConfig {
    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.into()));
        if self.kappas.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
            return bad("kappas must be positive");
        }
        if self.n < 4 || self.n_check.is_some_and(|n| n < 4) {
            return bad("lattices need at least 4 points per axis");
        }
        if !(self.rho > 0.0 && self.mu > 0.0 && self.lambda_over_mu >= 0.0 && self.ell > 0.0) {
            return bad("rho, mu, ell must be positive and lambda_over_mu nonnegative");
        }
        if self.xi_points < 2 || !(self.fourier_tol > 0.0) {
            return bad("xi_points must be at least 2 and fourier_tol positive");
        }
        Ok(())
    }
}

pub fn source_rows(cfg: &GreensConfig) -> elastab::Result<Vec<SourceRow>> {
    let medium = Medium::new(cfg.rho, cfg.mu, cfg.lambda_over_mu * cfg.mu)?;
    let lattice = Lattice::new(cfg.n, cfg.ell)?;
    let check = cfg.n_check.map(|n| Lattice::new(n, cfg.ell)).transpose()?;
    let mut rows = Vec::new();
    for (ki, &kappa) in cfg.kappas.iter().enumerate() {
        let omega = kappa * medium.theta_s() / cfg.ell;
        let k_s = WaveNumbers::new(&medium, omega).k_s;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(ki as u64));
        let sources: Vec<SmoothSource> =
            (0..cfg.sources).map(|_| SmoothSource::random(&mut rng, cfg.ell, cfg.source_wave * k_s)).collect();
        let main = verify_lattice_batch(&lattice, cfg.ell, &medium, omega, &sources)?;
        let second = match &check {
            Some(l) => Some(verify_lattice_batch(l, cfg.ell, &medium, omega, &sources)?),
            None => None,
        };
        for (i, c) in main.iter().enumerate() {
            let ratio_check = second.as_ref().map(|s| s[i].ratio);
            let delta = ratio_check.map(|r| (r - c.ratio).abs() / c.ratio);
            let scalar_bound = c.kappa_s * (1.0 + SCALAR_TOL);
            rows.push(SourceRow {
                kappa_s: c.kappa_s,
                omega,
                source: i,
                n: cfg.n,
                ratio: c.ratio,
                bound: c.bound,
                slack: c.slack,
                scalar_ratio: c.scalar_ratio,
                scalar_bound,
                ratio_check,
                two_grid_delta: delta,
                pass: c.ratio <= c.bound && c.scalar_ratio <= scalar_bound && delta.map_or(true, |d| d <= TWO_GRID_TOL),
            });
        }
    }
    Ok(rows)
}

pub fn fourier_rows(cfg: &GreensConfig) -> elastab::Result<Vec<FourierRow>> {
    cfg.fourier
        .par_iter()
        .map(|case| {
            let k_p = case.k_s / (2.0 + case.lambda_over_mu).sqrt();
            let k = WaveNumbers { k_s: case.k_s, k_p, omega: case.k_s };
            let grid = default_xi_grid(case.k_s, cfg.xi_points);
            let norm = fourier_multiplier_norm(&k, case.ell, &grid, cfg.fourier_tol)?;
            let bound = 2.0 + 8.0 * case.k_s * case.ell;
            Ok(FourierRow {
                k_s: case.k_s,
                k_p,
                ell: case.ell,
                lambda_over_mu: case.lambda_over_mu,
                multiplier_norm: norm,
                bound,
                pass: norm <= bound,
            })
        })
        .collect()
}

pub fn run(cfg: &GreensConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let sources = source_rows(cfg).map_err(CliError::from_core)?;
    let fourier = fourier_rows(cfg).map_err(CliError::from_core)?;
    let pass = sources.iter().all(|r| r.pass) && fourier.iter().all(|r| r.pass);
    let failed = sources.iter().filter(|r| !r.pass).count() + fourier.iter().filter(|r| !r.pass).count();
    Ok(Outcome {
        tables: vec![
            ("greens_sources".into(), sources.iter().map(to_value).collect::<Result<_, _>>()?),
            ("greens_fourier".into(), fourier.iter().map(to_value).collect::<Result<_, _>>()?),
        ],
        pass,
        summary: format!("{} source rows, {} multiplier rows, {failed} failed", sources.len(), fourier.len()),
    })
}
