use serde::{Deserialize, Serialize};

use super::norm;
use crate::{Error, Result};

/// Radial coefficient profile `φ(|x|)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Constant {
        value: f64,
    },
    /// `base·(1 + coeff·(r/radius)^power)`, monotone in `r`.
    RadialPower {
        base: f64,
        coeff: f64,
        power: f64,
        radius: f64,
    },
    /// `values[k]` on `[breaks[k-1], breaks[k])`, with `breaks` increasing.
    PiecewiseRadial {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Profile {
    pub fn constant(value: f64) -> Self {
        Profile::Constant { value }
    }

    fn validate(&self, name: &str) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidMaterial(format!("{name}: {m}")));
        match self {
            Profile::Constant { value } if !value.is_finite() => bad(format!("value {value}")),
            Profile::RadialPower { base, coeff, power, radius } => {
                if ![*base, *coeff, *power, *radius].iter().all(|v| v.is_finite()) {
                    return bad("non-finite parameter".into());
                }
                if *power <= 0.0 || *radius <= 0.0 {
                    return bad("power and radius must be positive".into());
                }
                Ok(())
            }
            Profile::PiecewiseRadial { breaks, values } => {
                if values.len() != breaks.len() + 1 {
                    return bad("need one more value than breaks".into());
                }
                if breaks.windows(2).any(|w| w[1] <= w[0]) || breaks.iter().any(|b| *b <= 0.0) {
                    return bad("breaks must be positive and increasing".into());
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return bad("non-finite value".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn at_radius(&self, r: f64) -> f64 {
        match self {
            Profile::Constant { value } => *value,
            Profile::RadialPower { base, coeff, power, radius } => base * (1.0 + coeff * (r / radius).powf(*power)),
            Profile::PiecewiseRadial { breaks, values } => values[breaks.partition_point(|b| *b <= r)],
        }
    }

    pub fn at(&self, x: &[f64]) -> f64 {
        self.at_radius(norm(x))
    }

    /// `dφ/dr`, `None` across jumps of piecewise profiles.
    pub fn radial_derivative(&self, r: f64) -> Option<f64> {
        match self {
            Profile::Constant { .. } => Some(0.0),
            Profile::RadialPower { base, coeff, power, radius } => {
                if r == 0.0 {
                    return Some(if *power > 1.0 {
                        0.0
                    } else if *power == 1.0 {
                        base * coeff / radius
                    } else {
                        f64::NAN
                    });
                }
                Some(base * coeff * power * (r / radius).powf(power - 1.0) / radius)
            }
            Profile::PiecewiseRadial { .. } => None,
        }
    }

    /// Gradient of `φ(|x|)` where it exists.
    pub fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        let r = norm(x);
        let dr = self.radial_derivative(r)?;
        if r == 0.0 {
            return Some(vec![0.0; x.len()]);
        }
        Some(x.iter().map(|xi| dr * xi / r).collect())
    }

    pub fn is_piecewise(&self) -> bool {
        matches!(self, Profile::PiecewiseRadial { .. })
    }

    /// Exact `(min, max)` over radii in `[r_lo, r_hi]`.
    pub fn range(&self, r_lo: f64, r_hi: f64) -> (f64, f64) {
        match self {
            Profile::Constant { value } => (*value, *value),
            Profile::RadialPower { .. } => {
                let (a, b) = (self.at_radius(r_lo), self.at_radius(r_hi));
                (a.min(b), a.max(b))
            }
            Profile::PiecewiseRadial { breaks, values } => {
                let first = breaks.partition_point(|b| *b <= r_lo);
                let last = breaks.partition_point(|b| *b < r_hi).max(first);
                let live = &values[first..=last];
                let lo = live.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = live.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        match self {
            Profile::Constant { value } => Profile::Constant { value: value * s },
            Profile::RadialPower { base, coeff, power, radius } => {
                Profile::RadialPower { base: base * s, coeff: *coeff, power: *power, radius: *radius }
            }
            Profile::PiecewiseRadial { breaks, values } => {
                Profile::PiecewiseRadial { breaks: breaks.clone(), values: values.iter().map(|v| v * s).collect() }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaterialKind {
    Constant,
    RadialProfile,
    PiecewiseRadial,
}

/// Density and Lamé fields with certified bounds over a radial range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialField {
    pub rho: Profile,
    pub mu: Profile,
    pub lambda: Profile,
    pub rho_min: f64,
    pub rho_max: f64,
    pub mu_min: f64,
    pub mu_max: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub description: MaterialKind,
}

impl MaterialField {
    /// Bounds are computed analytically over radii `[r_lo, r_hi]`.
    pub fn new(rho: Profile, mu: Profile, lambda: Profile, r_lo: f64, r_hi: f64) -> Result<Self> {
        rho.validate("rho")?;
        mu.validate("mu")?;
        lambda.validate("lambda")?;
        if !(r_lo >= 0.0 && r_hi > r_lo) {
            return Err(Error::InvalidMaterial(format!("radial range [{r_lo}, {r_hi}]")));
        }
        let (rho_min, rho_max) = rho.range(r_lo, r_hi);
        let (mu_min, mu_max) = mu.range(r_lo, r_hi);
        let (lambda_min, lambda_max) = lambda.range(r_lo, r_hi);
        if !(rho_min > 0.0) {
            return Err(Error::InvalidMaterial(format!("rho_min = {rho_min} must be positive")));
        }
        if !(mu_min > 0.0) {
            return Err(Error::InvalidMaterial(format!("mu_min = {mu_min} must be positive")));
        }
        if !(lambda_min >= 0.0) {
            return Err(Error::InvalidMaterial(format!("lambda_min = {lambda_min} must be nonnegative")));
        }
        if ![rho_max, mu_max, lambda_max].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidMaterial("unbounded coefficient".into()));
        }
        let all = [&rho, &mu, &lambda];
        let description = if all.iter().any(|p| p.is_piecewise()) {
            MaterialKind::PiecewiseRadial
        } else if all.iter().all(|p| matches!(p, Profile::Constant { .. })) {
            MaterialKind::Constant
        } else {
            MaterialKind::RadialProfile
        };
        Ok(Self { rho, mu, lambda, rho_min, rho_max, mu_min, mu_max, lambda_min, lambda_max, description })
    }

    pub fn homogeneous(rho: f64, mu: f64, lambda: f64) -> Result<Self> {
        Self::new(Profile::constant(rho), Profile::constant(mu), Profile::constant(lambda), 0.0, 1.0)
    }

    pub fn is_constant(&self) -> bool {
        self.description == MaterialKind::Constant
    }

    pub fn rho_at(&self, x: &[f64]) -> f64 {
        self.rho.at(x)
    }

    pub fn mu_at(&self, x: &[f64]) -> f64 {
        self.mu.at(x)
    }

    pub fn lambda_at(&self, x: &[f64]) -> f64 {
        self.lambda.at(x)
    }

    pub fn wave_speeds(&self) -> WaveSpeeds<'_> {
        WaveSpeeds { material: self }
    }
}

/// Shear and pressure wave speeds of a [`MaterialField`].
#[derive(Clone, Copy, Debug)]
pub struct WaveSpeeds<'a> {
    material: &'a MaterialField,
}

impl WaveSpeeds<'_> {
    pub fn theta_s(&self, x: &[f64]) -> f64 {
        (self.material.mu_at(x) / self.material.rho_at(x)).sqrt()
    }

    pub fn theta_p(&self, x: &[f64]) -> f64 {
        let m = self.material;
        ((m.lambda_at(x) + 2.0 * m.mu_at(x)) / m.rho_at(x)).sqrt()
    }

    pub fn theta_s_min(&self) -> f64 {
        (self.material.mu_min / self.material.rho_max).sqrt()
    }
}
