use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::assembly::assemble;
use super::mesh::{build_annulus_mesh, mesh_for_resolution, Mesh};
use super::power::{power_iteration, POWER_TOL};
use crate::bounds::{bound_obstacle_ideal, bound_obstacle_realistic, stability_simple_robin_star};
use crate::model::{derive_groups, DomainSpec, MaterialField, MultiplierSpec, RobinSpec};
use crate::{Error, Result};

/// Impedance choice per row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepRobin {
    Fixed {
        alpha_t: f64,
        alpha_n: f64,
    },
    /// `α_T = 1`, `α_N = √(2 + λ/μ)`.
    Realistic,
}

/// Explicit mesh; rows then check the resolution policy instead of
/// choosing the mesh from it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshSize {
    pub n_r: usize,
    pub n_theta: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default = "half")]
    pub r_in: f64,
    #[serde(default = "one")]
    pub ell: f64,
    #[serde(default = "one")]
    pub rho: f64,
    #[serde(default = "one")]
    pub mu: f64,
    /// Angular frequencies; `kappas` are converted with `ω = κ ϑ_S / ℓ`.
    #[serde(default)]
    pub omegas: Vec<f64>,
    #[serde(default)]
    pub kappas: Vec<f64>,
    #[serde(default = "unit_list")]
    pub lambda_over_mu: Vec<f64>,
    #[serde(default = "fixed_unit")]
    pub robin: SweepRobin,
    #[serde(default = "two")]
    pub order: usize,
    #[serde(default = "ten")]
    pub points_per_wavelength: f64,
    #[serde(default = "min_theta")]
    pub n_theta_min: usize,
    #[serde(default)]
    pub mesh: Option<MeshSize>,
    #[serde(default)]
    pub force: bool,
    #[serde(default = "default_iters")]
    pub iters: usize,
    #[serde(default)]
    pub seed: u64,
}

fn half() -> f64 {
    0.5
}
fn one() -> f64 {
    1.0
}
fn two() -> usize {
    2
}
fn ten() -> f64 {
    10.0
}
fn min_theta() -> usize {
    32
}
fn default_iters() -> usize {
    5000
}
fn unit_list() -> Vec<f64> {
    vec![1.0]
}
fn fixed_unit() -> SweepRobin {
    SweepRobin::Fixed { alpha_t: 1.0, alpha_n: 1.0 }
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            r_in: 0.5,
            ell: 1.0,
            rho: 1.0,
            mu: 1.0,
            omegas: Vec::new(),
            kappas: Vec::new(),
            lambda_over_mu: unit_list(),
            robin: fixed_unit(),
            order: 2,
            points_per_wavelength: 10.0,
            n_theta_min: 32,
            mesh: None,
            force: false,
            iters: default_iters(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub omega: f64,
    pub kappa_s: f64,
    pub lambda_over_mu: f64,
    pub alpha_t: f64,
    pub alpha_n: f64,
    pub order: usize,
    pub n_r: usize,
    pub n_theta: usize,
    pub dofs: usize,
    pub points_per_wavelength: f64,
    pub resolution_ok: bool,
    pub c_emp: Option<f64>,
    pub iterations: Option<usize>,
    pub bound_ideal: Option<f64>,
    pub bound_realistic: Option<f64>,
    pub bound_simple_robin_star: Option<f64>,
    /// Smallest applicable bound.
    pub bound: Option<f64>,
    pub slack: Option<f64>,
    pub warning: Option<String>,
    pub error: Option<String>,
}

/// `C_emp(2ω)/C_emp(ω)` for a pair of rows at equal `λ/μ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublingRatio {
    pub omega: f64,
    pub lambda_over_mu: f64,
    pub ratio: f64,
}

/// `max/min` of `C_emp` over the `λ/μ` list at one frequency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaSpread {
    pub omega: f64,
    pub max_over_min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub doubling: Vec<DoublingRatio>,
    pub lambda_spread: Vec<LambdaSpread>,
}

pub const LOCKING_WARNING: &str = "order-1 elements lock as lambda/mu grows";

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_in > 0.0 && self.r_in < self.ell) {
            return Err(Error::Config(format!("need 0 < r_in < ell, got {}, {}", self.r_in, self.ell)));
        }
        if !(self.rho > 0.0 && self.mu > 0.0) {
            return Err(Error::Config("rho and mu must be positive".into()));
        }
        if self.omegas.is_empty() == self.kappas.is_empty() {
            return Err(Error::Config("give exactly one of omegas or kappas".into()));
        }
        if self.omegas.iter().chain(&self.kappas).any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::Config("frequencies must be positive".into()));
        }
        if self.lambda_over_mu.is_empty() || self.lambda_over_mu.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(Error::Config("lambda_over_mu must be a nonempty list of nonnegative numbers".into()));
        }
        if self.order != 1 && self.order != 2 {
            return Err(Error::Config(format!("order must be 1 or 2, got {}", self.order)));
        }
        if let SweepRobin::Fixed { alpha_t, alpha_n } = self.robin {
            if !(alpha_t > 0.0 && alpha_n > 0.0) {
                return Err(Error::Config("alphas must be positive".into()));
            }
        }
        if self.iters == 0 {
            return Err(Error::Config("iters must be positive".into()));
        }
        Ok(())
    }

    pub fn theta_s(&self) -> f64 {
        (self.mu / self.rho).sqrt()
    }

    pub fn omega_list(&self) -> Vec<f64> {
        if self.omegas.is_empty() {
            self.kappas.iter().map(|k| k * self.theta_s() / self.ell).collect()
        } else {
            self.omegas.clone()
        }
    }

    /// Robin coefficients of the row at `λ/μ = ratio`.
    pub fn alphas(&self, ratio: f64) -> (f64, f64) {
        match self.robin {
            SweepRobin::Fixed { alpha_t, alpha_n } => (alpha_t, alpha_n),
            SweepRobin::Realistic => (1.0, (2.0 + ratio).sqrt()),
        }
    }

    pub fn mesh(&self, omega: f64) -> Result<Mesh> {
        match self.mesh {
            Some(m) => build_annulus_mesh(self.r_in, self.ell, m.n_r, m.n_theta, self.order),
            None => mesh_for_resolution(
                self.r_in,
                self.ell,
                self.order,
                omega,
                self.theta_s(),
                self.points_per_wavelength,
                self.n_theta_min,
            ),
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(1.0)
}

fn run_row(spec: &SweepSpec, omega: f64, ratio: f64) -> SweepRow {
    let (alpha_t, alpha_n) = spec.alphas(ratio);
    let kappa_s = omega * spec.ell / spec.theta_s();
    let mut row = SweepRow {
        omega,
        kappa_s,
        lambda_over_mu: ratio,
        alpha_t,
        alpha_n,
        order: spec.order,
        n_r: 0,
        n_theta: 0,
        dofs: 0,
        points_per_wavelength: 0.0,
        resolution_ok: false,
        c_emp: None,
        iterations: None,
        bound_ideal: None,
        bound_realistic: None,
        bound_simple_robin_star: None,
        bound: None,
        slack: None,
        warning: (spec.order == 1).then(|| LOCKING_WARNING.to_string()),
        error: None,
    };
    if let Err(e) = fill_row(spec, &mut row) {
        row.error = Some(e.to_string());
    }
    row
}

fn fill_row(spec: &SweepSpec, row: &mut SweepRow) -> Result<()> {
    let material = MaterialField::homogeneous(spec.rho, spec.mu, row.lambda_over_mu * spec.mu)?;
    let robin = RobinSpec::from_alphas(row.alpha_t, row.alpha_n, &material)?;
    let domain = DomainSpec::annulus(2, spec.r_in, spec.ell)?;
    let mult = MultiplierSpec::identity(2);
    let groups = derive_groups(&material, &domain, &robin, &mult, row.omega)?;
    row.bound_simple_robin_star = Some(stability_simple_robin_star(&groups, &mult, 2)?.bound_value);
    if close(row.alpha_t, 1.0) && close(row.alpha_n, 1.0) {
        row.bound_ideal = Some(bound_obstacle_ideal(row.kappa_s, 2)?.0);
    }
    if close(row.alpha_t, 1.0) && close(row.alpha_n, (2.0 + row.lambda_over_mu).sqrt()) {
        row.bound_realistic = Some(bound_obstacle_realistic(row.kappa_s, row.lambda_over_mu)?);
    }
    row.bound =
        [row.bound_ideal, row.bound_realistic, row.bound_simple_robin_star].into_iter().flatten().reduce(f64::min);

    let mesh = spec.mesh(row.omega)?;
    let res = mesh.resolution(row.omega, spec.theta_s());
    row.n_r = mesh.n_r;
    row.n_theta = mesh.n_theta;
    row.points_per_wavelength = res.points_per_wavelength;
    row.resolution_ok = res.points_per_wavelength >= spec.points_per_wavelength;
    if !row.resolution_ok && !spec.force {
        return Err(Error::Mesh(format!(
            "{:.3} points per wavelength below the required {}",
            res.points_per_wavelength, spec.points_per_wavelength
        )));
    }
    let system = assemble(&mesh, &material, &robin, row.omega)?;
    row.dofs = system.n_free();
    let p = power_iteration(&system, spec.iters, spec.seed, POWER_TOL)?;
    row.c_emp = Some(p.constant);
    row.iterations = Some(p.iterations);
    row.slack = row.bound.map(|b| b - p.constant);
    Ok(())
}

/// Rows in `(ω, λ/μ)` order; failed rows carry their error and the sweep
/// continues.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let omegas = spec.omega_list();
    let cases: Vec<(f64, f64)> =
        omegas.iter().flat_map(|&w| spec.lambda_over_mu.iter().map(move |&r| (w, r))).collect();
    let rows: Vec<SweepRow> = cases.par_iter().map(|&(w, r)| run_row(spec, w, r)).collect();

    let mut doubling = Vec::new();
    for a in &rows {
        for b in &rows {
            if close(b.omega, 2.0 * a.omega) && a.lambda_over_mu == b.lambda_over_mu {
                if let (Some(ca), Some(cb)) = (a.c_emp, b.c_emp) {
                    doubling.push(DoublingRatio { omega: a.omega, lambda_over_mu: a.lambda_over_mu, ratio: cb / ca });
                }
            }
        }
    }
    let mut lambda_spread = Vec::new();
    for &w in &omegas {
        let c: Vec<f64> = rows.iter().filter(|r| r.omega == w).filter_map(|r| r.c_emp).collect();
        if c.len() >= 2 {
            let (lo, hi) = c.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            lambda_spread.push(LambdaSpread { omega: w, max_over_min: hi / lo });
        }
    }
    Ok(SweepTable { rows, doubling, lambda_spread })
}

/// Least-squares slope of `log C_emp` against `log κ_S` over rows with
/// `κ_S ∈ [lo, hi]`.
pub fn loglog_slope(rows: &[SweepRow], lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.kappa_s >= lo * (1.0 - 1e-12) && r.kappa_s <= hi * (1.0 + 1e-12))
        .filter_map(|r| r.c_emp.map(|c| (r.kappa_s.ln(), c.ln())))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
