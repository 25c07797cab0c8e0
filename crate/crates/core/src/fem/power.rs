use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::assembly::{assemble, AssembledSystem};
use super::mesh::Mesh;
use crate::model::{MaterialField, RobinSpec};
use crate::{Error, Result};

pub const POWER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerResult {
    /// `ω² σ_max`.
    pub constant: f64,
    pub sigma_max: f64,
    pub iterations: usize,
    /// Successive estimates of the constant.
    pub history: Vec<f64>,
    /// Maximizing load on free dofs, unit `ρ`-norm.
    pub load: Vec<C>,
}

fn m_norm(system: &AssembledSystem, x: &[C]) -> f64 {
    system.m_ff.quad(x).max(0.0).sqrt()
}

/// Power iteration on `T*T` with `T = S⁻¹M` and `T* = S^{-H}M` the
/// adjoint in the `ρ`-weighted inner product.
pub fn power_iteration(system: &AssembledSystem, iters: usize, seed: u64, tol: f64) -> Result<PowerResult> {
    let fac = system.factorize()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<C> =
        (0..system.n_free()).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let s = m_norm(system, &x);
    x.iter_mut().for_each(|z| *z /= s);
    let w2 = system.omega * system.omega;
    let mut history: Vec<f64> = Vec::new();
    for k in 0..iters {
        let (y, _) = fac.solve(&system.m_ff.mul(&x))?;
        let est = w2 * m_norm(system, &y);
        if let Some(&prev) = history.last() {
            if (est - prev).abs() < tol * est {
                history.push(est);
                return Ok(PowerResult { constant: est, sigma_max: est / w2, iterations: k + 1, history, load: x });
            }
        }
        history.push(est);
        let (z, _) = fac.solve_adjoint(&system.m_ff.mul(&y))?;
        let zn = m_norm(system, &z);
        if !(zn > 0.0) {
            return Err(Error::Solver { msg: "power iterate vanished".into(), residual: zn });
        }
        x = z.into_iter().map(|v| v / zn).collect();
    }
    let n = history.len();
    Err(Error::Iteration {
        iters,
        last: history.last().copied().unwrap_or(f64::NAN),
        previous: if n >= 2 { history[n - 2] } else { f64::NAN },
    })
}

pub fn empirical_constant(
    mesh: &Mesh,
    material: &MaterialField,
    robin: &RobinSpec,
    omega: f64,
    iters: usize,
    seed: u64,
) -> Result<f64> {
    let system = assemble(mesh, material, robin, omega)?;
    Ok(power_iteration(&system, iters, seed, POWER_TOL)?.constant)
}
