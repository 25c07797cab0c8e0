use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::model::MaterialField;
use crate::quad::gauss_on;
use crate::{Error, Result};

pub type Mat3 = [[C; 3]; 3];

const ZERO: C = C::new(0.0, 0.0);
const I: C = C::new(0.0, 1.0);

/// Homogeneous isotropic medium.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    pub rho: f64,
    pub mu: f64,
    pub lambda: f64,
}

impl Medium {
    pub fn new(rho: f64, mu: f64, lambda: f64) -> Result<Self> {
        if !(rho > 0.0 && mu > 0.0 && lambda >= 0.0) || !(rho * mu * (lambda + 1.0)).is_finite() {
            return Err(Error::InvalidMaterial(format!("rho = {rho}, mu = {mu}, lambda = {lambda}")));
        }
        Ok(Self { rho, mu, lambda })
    }

    pub fn from_material(m: &MaterialField) -> Result<Self> {
        if !m.is_constant() {
            return Err(Error::InvalidMaterial("fundamental solution needs constant coefficients".into()));
        }
        Self::new(m.rho_max, m.mu_max, m.lambda_max)
    }

    pub fn theta_s(&self) -> f64 {
        (self.mu / self.rho).sqrt()
    }

    pub fn theta_p(&self) -> f64 {
        ((self.lambda + 2.0 * self.mu) / self.rho).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveNumbers {
    pub k_s: f64,
    pub k_p: f64,
    pub omega: f64,
}

impl WaveNumbers {
    pub fn new(medium: &Medium, omega: f64) -> Self {
        Self { k_s: omega / medium.theta_s(), k_p: omega / medium.theta_p(), omega }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenTensorValue {
    pub g: Mat3,
    pub r: f64,
}

fn radius(y: &[f64; 3]) -> Result<f64> {
    let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
    if r == 0.0 || !r.is_finite() {
        return Err(Error::Singularity(r));
    }
    Ok(r)
}

/// `G^A = e^{i k_s r}/(4π ϑ_S² r)` and `G^E = (e^{i k_s r} − e^{i k_p r})/(4π r)`.
pub fn scalar_kernels(y: &[f64; 3], k: &WaveNumbers, theta_s: f64) -> Result<(C, C)> {
    let r = radius(y)?;
    let es = (I * (k.k_s * r)).exp();
    let ep = (I * (k.k_p * r)).exp();
    let g_a = es / (4.0 * PI * theta_s * theta_s * r);
    let g_e = (es - ep) / (4.0 * PI * r);
    Ok((g_a, g_e))
}

/// `∇²(e^{ikr}/r)` at `y`.
pub fn hessian_radial(k: f64, y: &[f64; 3]) -> Result<Mat3> {
    let r = radius(y)?;
    let kr = k * r;
    let e = (I * kr).exp();
    let r3 = r * r * r;
    let a = e * (I * kr - 1.0) / r3;
    let b = e * (3.0 - 3.0 * I * kr - kr * kr) / r3;
    Ok(radial_tensor(a, b, y, r))
}

/// `a I + b ŷ⊗ŷ`.
fn radial_tensor(a: C, b: C, y: &[f64; 3], r: f64) -> Mat3 {
    let u = [y[0] / r, y[1] / r, y[2] / r];
    let mut m = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = b * (u[i] * u[j]);
        }
        m[i][i] += a;
    }
    m
}

/// `e^{ix}(ix − 1) + 1 + x²/2 = Σ_{n≥3} (n−1)/n! (ix)^n`.
fn series_a(x: f64) -> C {
    if x.abs() >= 0.5 {
        return (I * x).exp() * (I * x - 1.0) + 1.0 + x * x / 2.0;
    }
    let ix = I * x;
    let mut term = ix * ix / 2.0;
    let mut sum = ZERO;
    for n in 3..30 {
        term = term * ix / n as f64;
        sum += term * (n - 1) as f64;
    }
    sum
}

/// `e^{ix}(3 − 3ix − x²) − 3 − x²/2 = Σ_{n≥4} (n−1)(n−3)/n! (ix)^n`.
fn series_b(x: f64) -> C {
    if x.abs() >= 0.5 {
        return (I * x).exp() * (3.0 - 3.0 * I * x - x * x) - 3.0 - x * x / 2.0;
    }
    let ix = I * x;
    let mut term = ix * ix * ix / 6.0;
    let mut sum = ZERO;
    for n in 4..30 {
        term = term * ix / n as f64;
        sum += term * ((n - 1) * (n - 3)) as f64;
    }
    sum
}

/// Radial coefficients `(A, B)` of `G = A I + B ŷ⊗ŷ`, where `u = G⋆f`
/// solves `−ω²ρu − div σ(u) = ρf`.
pub fn green_coefficients(r: f64, medium: &Medium, omega: f64) -> Result<(C, C)> {
    if r == 0.0 || !r.is_finite() {
        return Err(Error::Singularity(r));
    }
    let q2 = medium.mu / (medium.lambda + 2.0 * medium.mu);
    if omega == 0.0 {
        let c = medium.rho / (8.0 * PI * medium.mu * r);
        return Ok((C::from(c * (1.0 + q2)), C::from(c * (1.0 - q2))));
    }
    let k = WaveNumbers::new(medium, omega);
    let (xs, xp) = (k.k_s * r, k.k_p * r);
    let pre = 1.0 / (4.0 * PI * medium.theta_s().powi(2));
    let ks2r3 = k.k_s * k.k_s * r * r * r;
    let half = (1.0 - q2) / (2.0 * r);
    let a = (I * xs).exp() / r - half + (series_a(xs) - series_a(xp)) / ks2r3;
    let b = half + (series_b(xs) - series_b(xp)) / ks2r3;
    Ok((a * pre, b * pre))
}

/// Green tensor; `omega = 0` gives `ρ` times the Kelvin tensor.
pub fn green_tensor(y: &[f64; 3], medium: &Medium, omega: f64) -> Result<GreenTensorValue> {
    let r = radius(y)?;
    let (a, b) = green_coefficients(r, medium, omega)?;
    Ok(GreenTensorValue { g: radial_tensor(a, b, y, r), r })
}

/// `G^A I + ω⁻² ∇²G^E` assembled directly from [`hessian_radial`].
pub fn green_tensor_split(y: &[f64; 3], medium: &Medium, omega: f64) -> Result<Mat3> {
    let k = WaveNumbers::new(medium, omega);
    let (g_a, _) = scalar_kernels(y, &k, medium.theta_s())?;
    let hs = hessian_radial(k.k_s, y)?;
    let hp = hessian_radial(k.k_p, y)?;
    let s = 1.0 / (4.0 * PI * omega * omega);
    let mut g = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = (hs[i][j] - hp[i][j]) * s;
        }
        g[i][i] += g_a;
    }
    Ok(g)
}

/// Kelvin (elastostatic) tensor for unit density.
pub fn kelvin_tensor(y: &[f64; 3], mu: f64, lambda: f64) -> Result<Mat3> {
    let r = radius(y)?;
    let q2 = mu / (lambda + 2.0 * mu);
    let c = 1.0 / (8.0 * PI * mu * r);
    Ok(radial_tensor(C::from(c * (1.0 + q2)), C::from(c * (1.0 - q2)), y, r))
}

/// `(∫_{B_a} G, ∫_{B_a} G^A)`; the tensor integral is a multiple of `I`.
pub fn ball_integrals(a: f64, medium: &Medium, omega: f64) -> Result<(C, C)> {
    let k_s = omega / medium.theta_s();
    let pre = 1.0 / (4.0 * PI * medium.theta_s().powi(2));
    let mut full = ZERO;
    let mut scalar = ZERO;
    for (r, w) in gauss_on(24, 0.0, a) {
        let (ca, cb) = green_coefficients(r, medium, omega)?;
        let shell = 4.0 * PI * r * r * w;
        full += (ca + cb / 3.0) * shell;
        scalar += (I * (k_s * r)).exp() / r * pre * shell;
    }
    Ok((full, scalar))
}
