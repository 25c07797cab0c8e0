use num_complex::Complex64 as C;

use super::kernel::WaveNumbers;
use crate::quad::adaptive;
use crate::{Error, Result};

/// `∂_r(η(r)(e^{i k_s r} − e^{i k_p r}))` with the cutoff `η = 1` on
/// `[0, 2ℓ]` and `η = (4ℓ − r)/(2ℓ)` on `[2ℓ, 4ℓ]`.
fn integrand(k: &WaveNumbers, ell: f64, r: f64) -> C {
    let es = C::from_polar(1.0, k.k_s * r);
    let ep = C::from_polar(1.0, k.k_p * r);
    let g = es - ep;
    let dg = C::new(0.0, k.k_s) * es - C::new(0.0, k.k_p) * ep;
    if r <= 2.0 * ell {
        dg
    } else {
        -g / (2.0 * ell) + dg * ((4.0 * ell - r) / (2.0 * ell))
    }
}

/// `n` equispaced frequencies on `[0, 20 k_s]`.
pub fn default_xi_grid(k_s: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| 20.0 * k_s * i as f64 / (n - 1).max(1) as f64).collect()
}

/// `max_ξ |∫₀^{4ℓ} ∂_r(η(e^{i k_s r} − e^{i k_p r})) cos(ξ r) dr|`, each
/// integral to absolute tolerance `tol`.
pub fn fourier_multiplier_norm(k: &WaveNumbers, ell: f64, xi_grid: &[f64], tol: f64) -> Result<f64> {
    if !(ell > 0.0) {
        return Err(Error::Domain(format!("ell = {ell}")));
    }
    let xi_max = xi_grid.iter().cloned().fold(0.0, f64::max);
    if xi_max < 10.0 * k.k_s {
        return Err(Error::Domain(format!("xi grid reaches {xi_max} < 10 k_s")));
    }
    let mut best = 0.0f64;
    for &xi in xi_grid {
        let f = |r: f64| integrand(k, ell, r) * (xi * r).cos();
        let v = adaptive(f, 0.0, 2.0 * ell, tol / 2.0)? + adaptive(f, 2.0 * ell, 4.0 * ell, tol / 2.0)?;
        best = best.max(v.norm());
    }
    Ok(best)
}
