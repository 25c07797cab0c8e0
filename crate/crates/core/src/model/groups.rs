use serde::{Deserialize, Serialize};

use super::{DomainSpec, MaterialField, MultiplierSpec, RobinSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessGroups {
    pub kappa_s: f64,
    pub alpha_t: f64,
    pub alpha_n: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_t: f64,
    pub beta_n: f64,
    pub chi: f64,
    pub zeta: f64,
    pub c_rob: f64,
    pub big_m: f64,
    pub small_m: f64,
    pub nu: f64,
    pub gamma: f64,
}

/// Groups for a spherical dissipative boundary of radius `ell`.
pub fn derive_groups(
    material: &MaterialField,
    domain: &DomainSpec,
    robin: &RobinSpec,
    mult: &MultiplierSpec,
    omega: f64,
) -> Result<DimensionlessGroups> {
    if !(material.rho_min > 0.0 && material.mu_min > 0.0 && material.lambda_min >= 0.0)
        || !(material.rho_max.is_finite() && material.mu_max.is_finite())
    {
        return Err(Error::InvalidMaterial("non-positive coefficient bounds".into()));
    }
    domain.validate()?;
    if !domain.diss_is_outer_sphere() {
        return Err(Error::UnsupportedDomain("the dissipative boundary must be the outer sphere of radius ell".into()));
    }
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega = {omega} must be nonnegative")));
    }
    if !(robin.alpha_t > 0.0 && robin.alpha_n > 0.0) {
        return Err(Error::InvalidRobin("alphas must be positive".into()));
    }
    let kappa_s = omega * domain.ell * (material.rho_max / material.mu_min).sqrt();
    let beta_t = 1.0;
    let beta_n = (domain.d - 1) as f64;
    let chi = (beta_t / robin.alpha_t).max(beta_n / robin.alpha_n);
    let ratio = robin.alpha_max / robin.alpha_min;
    let c_rob = (2.0 + ratio.sqrt()) * robin.alpha_max.sqrt();
    let zeta = if mult.normal_aligned() { 0.0 } else { 2.0 * mult.nu * ratio.sqrt() };
    Ok(DimensionlessGroups {
        kappa_s,
        alpha_t: robin.alpha_t,
        alpha_n: robin.alpha_n,
        alpha_min: robin.alpha_min,
        alpha_max: robin.alpha_max,
        beta_t,
        beta_n,
        chi,
        zeta,
        c_rob,
        big_m: mult.big_m,
        small_m: mult.small_m,
        nu: mult.nu,
        gamma: mult.gamma,
    })
}
