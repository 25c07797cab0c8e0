use serde::{Deserialize, Serialize};

use super::MaterialField;
use crate::{Error, Result};

/// Impedance matrix `A ξ = a_T ξ_T + a_N ξ_N` and its adimensional form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobinSpec {
    pub a_t: f64,
    pub a_n: f64,
    pub alpha_t: f64,
    pub alpha_n: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
}

impl RobinSpec {
    pub fn new(a_t: f64, a_n: f64, material: &MaterialField) -> Result<Self> {
        if !(a_t > 0.0 && a_n > 0.0 && a_t.is_finite() && a_n.is_finite()) {
            return Err(Error::InvalidRobin(format!("a_t = {a_t}, a_n = {a_n} must be positive")));
        }
        let z = impedance_scale(material);
        let (alpha_t, alpha_n) = (a_t / z, a_n / z);
        Ok(Self { a_t, a_n, alpha_t, alpha_n, alpha_min: alpha_t.min(alpha_n), alpha_max: alpha_t.max(alpha_n) })
    }

    pub fn from_alphas(alpha_t: f64, alpha_n: f64, material: &MaterialField) -> Result<Self> {
        let z = impedance_scale(material);
        Self::new(alpha_t * z, alpha_n * z, material)
    }
}

/// `sqrt(ρ_max μ_min)`.
pub fn impedance_scale(material: &MaterialField) -> f64 {
    (material.rho_max * material.mu_min).sqrt()
}
