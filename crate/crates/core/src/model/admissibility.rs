use serde::{Deserialize, Serialize};

use super::{DomainSpec, MaterialField, Profile};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialAdmissibility {
    pub theta_rho: f64,
    pub theta_mu: f64,
    pub theta_lambda: f64,
    pub theta: f64,
    pub gamma: f64,
}

enum Sign {
    /// Penalize decrease (density).
    Decrease,
    /// Penalize increase (Lamé parameters).
    Increase,
}

/// Radial growth constants of the coefficients, probed on `n_samples` radii
/// in `[r_in, ell]`.
pub fn check_radial_admissibility(
    material: &MaterialField,
    domain: &DomainSpec,
    n_samples: usize,
) -> Result<RadialAdmissibility> {
    domain.validate()?;
    if n_samples < 2 {
        return Err(Error::DomainEvaluation("need at least two samples per ray".into()));
    }
    let (r0, ell) = (domain.inner_radius(), domain.ell);
    let radii: Vec<f64> = (0..n_samples).map(|i| r0 + (ell - r0) * i as f64 / (n_samples - 1) as f64).collect();
    let step = 1e-6 * ell;
    let theta_rho = probe(&material.rho, &radii, step, Sign::Decrease, "rho")?;
    let theta_mu = probe(&material.mu, &radii, step, Sign::Increase, "mu")?;
    let theta_lambda = probe(&material.lambda, &radii, step, Sign::Increase, "lambda")?;
    let theta = theta_rho + theta_mu.max(theta_lambda);
    if theta >= 2.0 {
        return Err(Error::InadmissibleCoefficients(format!("Theta = {theta} >= 2")));
    }
    Ok(RadialAdmissibility { theta_rho, theta_mu, theta_lambda, theta, gamma: (2.0 - theta) / 2.0 })
}

fn probe(p: &Profile, radii: &[f64], step: f64, sign: Sign, name: &str) -> Result<f64> {
    let vals: Vec<f64> = radii.iter().map(|r| p.at_radius(*r)).collect();
    if vals.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::DomainEvaluation(format!("{name} not sampleable")));
    }
    if p.is_piecewise() {
        // discrete monotonicity over every sampled pair r_i < r_j
        let mut run = vals[0];
        for &v in &vals[1..] {
            let ok = match sign {
                Sign::Decrease => v >= run,
                Sign::Increase => v <= run,
            };
            if !ok {
                return Err(Error::InadmissibleCoefficients(format!("{name} violates radial monotonicity")));
            }
            run = v;
        }
        return Ok(0.0);
    }
    let mut theta = 0.0f64;
    for (&r, &v) in radii.iter().zip(&vals) {
        if v <= 1e-14 * vals.iter().cloned().fold(0.0, f64::max) {
            continue;
        }
        let lo = (r - step).max(0.0);
        let hi = r + step;
        let dr = (p.at_radius(hi) - p.at_radius(lo)) / (hi - lo);
        let x_grad = r * dr / v;
        let t = match sign {
            Sign::Decrease => -x_grad,
            Sign::Increase => x_grad,
        };
        if !t.is_finite() {
            return Err(Error::DomainEvaluation(format!("{name} derivative probe at r = {r}")));
        }
        theta = theta.max(t);
    }
    Ok(theta)
}
