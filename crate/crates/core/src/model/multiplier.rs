use serde::{Deserialize, Serialize};

use super::DomainSpec;
use crate::{Error, Result};

/// Descriptor of `φ` in `h = x + ∇φ`; `φ` vanishes near the dissipative boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    /// `‖∇φ‖∞` (m).
    #[serde(default)]
    pub grad_max: f64,
    /// `‖∇²φ‖∞` (Frobenius).
    pub hessian_max: f64,
    /// `min Δφ`.
    pub laplacian_min: f64,
    /// Korn constant `𝒦₀`.
    pub korn_k0: f64,
    /// `sup λ/μ`.
    pub lambda_over_mu: f64,
}

impl Perturbation {
    pub fn is_zero(&self) -> bool {
        self.grad_max == 0.0 && self.hessian_max == 0.0 && self.laplacian_min == 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplierKind {
    Identity,
    Perturbed {
        phi: Perturbation,
    },
    /// A multiplier described only through its constants; not normal-aligned
    /// on the dissipative boundary.
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSpec {
    pub kind: MultiplierKind,
    pub big_m: f64,
    pub small_m: f64,
    pub nu: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub gamma: f64,
}

impl MultiplierSpec {
    pub fn identity(d: usize) -> Self {
        Self {
            kind: MultiplierKind::Identity,
            big_m: 1.0,
            small_m: 1.0,
            nu: (d as f64).sqrt(),
            eta: 0.0,
            epsilon: 0.0,
            gamma: 1.0,
        }
    }

    pub fn general(big_m: f64, small_m: f64, nu: f64, eta: f64, epsilon: f64) -> Result<Self> {
        if !(big_m >= 1.0 && small_m >= 0.0 && nu >= 0.0 && eta >= 0.0 && epsilon >= 0.0) {
            return Err(Error::Inadmissible("need M >= 1 and m, nu, eta, epsilon >= 0".into()));
        }
        Ok(Self { kind: MultiplierKind::General, big_m, small_m, nu, eta, epsilon, gamma: gamma_from(eta, epsilon)? })
    }

    /// `h = x` in a neighbourhood of a spherical dissipative boundary.
    pub fn normal_aligned(&self) -> bool {
        !matches!(self.kind, MultiplierKind::General)
    }
}

fn gamma_from(eta: f64, epsilon: f64) -> Result<f64> {
    if eta + epsilon >= 2.0 {
        return Err(Error::InadmissibleMultiplier(eta + epsilon));
    }
    Ok((2.0 - eta - epsilon) / 2.0)
}

/// Multiplier `h = x` or `h = x + ∇φ`; `nu` uses the Frobenius norm of `∇h`.
pub fn multiplier_for(domain: &DomainSpec, phi: Option<&Perturbation>) -> Result<MultiplierSpec> {
    domain.validate()?;
    let d = domain.d;
    let phi = match phi {
        Some(p) if !p.is_zero() => p,
        _ => return Ok(MultiplierSpec::identity(d)),
    };
    let vals = [phi.grad_max, phi.hessian_max, phi.korn_k0, phi.lambda_over_mu];
    if vals.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || !phi.laplacian_min.is_finite() {
        return Err(Error::Inadmissible("perturbation descriptor must be finite and nonnegative".into()));
    }
    let eta = (-phi.laplacian_min).max(0.0);
    let epsilon = (1.0 + 2.0 * phi.korn_k0 + phi.lambda_over_mu) * phi.hessian_max;
    let gamma = gamma_from(eta, epsilon)?;
    let big_m = (1.0 + phi.grad_max / domain.ell).max(1.0);
    let nu = ((d as f64).sqrt() + phi.hessian_max) / big_m;
    Ok(MultiplierSpec { kind: MultiplierKind::Perturbed { phi: *phi }, big_m, small_m: 1.0, nu, eta, epsilon, gamma })
}
