use elastab::bounds::{
    bound_fundamental, bound_general_robin, bound_obstacle_ideal, bound_obstacle_realistic, stability_simple_robin,
    stability_simple_robin_star, GenericConstants,
};
use elastab::model::{derive_groups, DomainSpec, MaterialField, MultiplierSpec, RobinSpec};
use serde::{Deserialize, Serialize};

use super::Outcome;
use crate::output::to_value;
use crate::CliError;

fn one() -> f64 {
    1.0
}

fn three() -> usize {
    3
}

fn unit_list() -> Vec<f64> {
    vec![1.0]
}

/// `bounds` configuration: homogeneous medium on a ball of radius `ell`,
/// identity multiplier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default = "three")]
    pub d: usize,
    #[serde(default = "one")]
    pub ell: f64,
    #[serde(default = "one")]
    pub rho: f64,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default)]
    pub omegas: Vec<f64>,
    #[serde(default)]
    pub kappas: Vec<f64>,
    #[serde(default = "unit_list")]
    pub lambda_over_mu: Vec<f64>,
    #[serde(default = "one")]
    pub alpha_t: f64,
    #[serde(default = "one")]
    pub alpha_n: f64,
    #[serde(default)]
    pub constants: GenericConstants,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsRow {
    pub omega: f64,
    pub kappa_s: f64,
    pub lambda_over_mu: f64,
    pub d: usize,
    pub alpha_t: f64,
    pub alpha_n: f64,
    pub simple_robin: f64,
    pub simple_robin_star: f64,
    pub obstacle_ideal_full: f64,
    pub obstacle_ideal_simplified: f64,
    pub obstacle_realistic: f64,
    pub general_robin: f64,
    pub general_robin_symbolic: bool,
    pub fundamental: Option<f64>,
    /// Full ideal-obstacle bound does not exceed its simplification.
    pub dominance: bool,
}

impl BoundsConfig {
    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.into()));
        if self.omegas.is_empty() == self.kappas.is_empty() {
            return bad("give exactly one of omegas or kappas");
        }
        if !matches!(self.d, 2 | 3) {
            return bad("d must be 2 or 3");
        }
        if self.lambda_over_mu.is_empty() {
            return bad("lambda_over_mu must not be empty");
        }
        Ok(())
    }

    fn theta_s(&self) -> f64 {
        (self.mu / self.rho).sqrt()
    }

    fn omegas(&self) -> Vec<f64> {
        if self.omegas.is_empty() {
            self.kappas.iter().map(|k| k * self.theta_s() / self.ell).collect()
        } else {
            self.omegas.clone()
        }
    }
}

fn row(cfg: &BoundsConfig, omega: f64, ratio: f64) -> elastab::Result<BoundsRow> {
    let material = MaterialField::homogeneous(cfg.rho, cfg.mu, ratio * cfg.mu)?;
    let domain = DomainSpec::ball(cfg.d, cfg.ell)?;
    let robin = RobinSpec::from_alphas(cfg.alpha_t, cfg.alpha_n, &material)?;
    let mult = MultiplierSpec::identity(cfg.d);
    let groups = derive_groups(&material, &domain, &robin, &mult, omega)?;
    let k = groups.kappa_s;
    let (full, simplified) = bound_obstacle_ideal(k, cfg.d)?;
    let general = bound_general_robin(k, &cfg.constants)?;
    Ok(BoundsRow {
        omega,
        kappa_s: k,
        lambda_over_mu: ratio,
        d: cfg.d,
        alpha_t: cfg.alpha_t,
        alpha_n: cfg.alpha_n,
        simple_robin: stability_simple_robin(&groups, &mult, cfg.d)?.bound_value,
        simple_robin_star: stability_simple_robin_star(&groups, &mult, cfg.d)?.bound_value,
        obstacle_ideal_full: full,
        obstacle_ideal_simplified: simplified,
        obstacle_realistic: bound_obstacle_realistic(k, ratio)?,
        general_robin: general.bound_value,
        general_robin_symbolic: general.symbolic,
        fundamental: if cfg.d == 3 { Some(bound_fundamental(k)?) } else { None },
        dominance: full <= simplified,
    })
}

/// Every bound is nondecreasing in `κ` within one `λ/μ` group.
fn monotone(rows: &[BoundsRow]) -> bool {
    let key = |r: &BoundsRow| {
        [r.simple_robin, r.simple_robin_star, r.obstacle_ideal_full, r.obstacle_ideal_simplified, r.obstacle_realistic]
    };
    rows.iter().all(|a| {
        rows.iter()
            .filter(|b| b.lambda_over_mu == a.lambda_over_mu && b.kappa_s >= a.kappa_s)
            .all(|b| key(a).iter().zip(key(b)).all(|(x, y)| *x <= y))
    })
}

pub fn run(cfg: &BoundsConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &ratio in &cfg.lambda_over_mu {
        for omega in cfg.omegas() {
            rows.push(row(cfg, omega, ratio).map_err(|e| CliError::Config(e.to_string()))?);
        }
    }
    let pass = rows.iter().all(|r| r.dominance) && monotone(&rows);
    let values = rows.iter().map(to_value).collect::<Result<Vec<_>, _>>()?;
    Ok(Outcome { tables: vec![("bounds".into(), values)], pass, summary: format!("{} bound rows", rows.len()) })
}
