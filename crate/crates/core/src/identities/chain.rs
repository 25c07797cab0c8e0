use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::audits::{frob, grad_norm_sq, strain, IdentityReport};
use super::samples::{sample_fem, Part};
use crate::bounds::{SimpleRobinTerms, SixthRootTerm};
use crate::fem::{assemble, power_iteration, solve, AssembledSystem, Mesh, SolveResult, SweepSpec, POWER_TOL};
use crate::model::{derive_groups, DimensionlessGroups, DomainSpec, MaterialField, MultiplierSpec, RobinSpec};
use crate::{Error, Result};

pub const CHAIN_TOL: f64 = 1e-3;
pub const THETA_STAR: f64 = 2.0 / 3.0;
pub const TAU_STAR: f64 = 1.0 / 6.0;

/// Norms of a discrete solution entering the estimate chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainNorms {
    /// `‖u‖_ρ`.
    pub u: f64,
    /// `‖f‖_ρ`.
    pub f: f64,
    /// `‖∇u‖`.
    pub grad: f64,
    /// `‖ε(u)‖_{μ,Γ_Diss}`.
    pub eps_gamma: f64,
    /// `ω^{1/2}‖u‖_{A,Γ_Diss}`.
    pub impedance: f64,
    pub omega: f64,
    pub ell: f64,
    pub mu_min: f64,
}

impl ChainNorms {
    pub fn from_solution(
        mesh: &Mesh,
        material: &MaterialField,
        system: &AssembledSystem,
        result: &SolveResult,
        f: &[C],
    ) -> Result<Self> {
        let s = sample_fem(mesh, &result.u, Some(f))?;
        let grad_sq: f64 = s.volume.iter().map(|p| p.w * grad_norm_sq(&p.grad)).sum();
        let eps_sq: f64 = s
            .surface
            .iter()
            .filter(|p| p.part == Part::Dissipative)
            .map(|p| {
                let e = strain(&p.grad);
                p.w * material.mu_at(&p.x) * frob(&e, &e).re
            })
            .sum();
        let omega = system.omega;
        Ok(Self {
            u: system.mass.quad(&result.u).max(0.0).sqrt(),
            f: system.mass.quad(f).max(0.0).sqrt(),
            grad: grad_sq.sqrt(),
            eps_gamma: eps_sq.sqrt(),
            impedance: (omega * system.robin.quad(&result.u)).max(0.0).sqrt(),
            omega,
            ell: mesh.ell,
            mu_min: material.mu_min,
        })
    }
}

/// Coefficients `P(θ,τ)` and `Q(θ)` of the combined quadratic inequality
/// `2(γ/M)ω²‖u‖² ≤ P ω⁻²‖f‖² + Q ‖f‖‖u‖`.
pub fn chain_coefficients(
    groups: &DimensionlessGroups,
    mult: &MultiplierSpec,
    d: usize,
    theta: f64,
    tau: f64,
) -> (f64, f64) {
    let k = groups.kappa_s;
    let s2 = std::f64::consts::SQRT_2;
    let p = s2 * (1.0 + groups.chi / k) * k.powf(2.0 - theta) + 2.0 / groups.alpha_n.sqrt() * k.powf(1.5 - tau);
    let young = groups.c_rob * k.sqrt() + 2.0 * k.powf(tau);
    let q = (d as f64 - 2.0 + mult.epsilon) / mult.big_m
        + groups.zeta
        + s2 * k.powf(theta)
        + (1.0 / groups.alpha_min + 2.0) * k
        + mult.big_m / (8.0 * mult.small_m) * young * young;
    (p, q)
}

/// `C(θ,τ)` with `ω²‖u‖_ρ ≤ C ‖f‖_ρ`, from the quadratic inequality.
pub fn chain_constant(groups: &DimensionlessGroups, mult: &MultiplierSpec, d: usize, theta: f64, tau: f64) -> f64 {
    let (p, q) = chain_coefficients(groups, mult, d, theta, tau);
    let a = 2.0 * mult.gamma / mult.big_m;
    ((a * p).sqrt() + q) / a
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub theta: f64,
    pub tau: f64,
    pub norms: ChainNorms,
    pub links: Vec<IdentityReport>,
    /// `C(θ,τ)`.
    pub constant: f64,
    /// Closed-form bracket bound `(M/γ)·{…}`.
    pub final_bound: f64,
    pub pass: bool,
}

impl ChainReport {
    pub fn require(self) -> Result<Self> {
        match self.links.iter().find(|l| !l.pass) {
            None => Ok(self),
            Some(l) => Err(Error::Accuracy {
                what: format!("chain link {}", l.name),
                achieved: l.rel_gap,
                target: l.tolerance,
            }),
        }
    }
}

/// Evaluate every inequality of the estimate chain on a discrete solution.
pub fn estimate_chain_audit(
    norms: &ChainNorms,
    groups: &DimensionlessGroups,
    mult: &MultiplierSpec,
    d: usize,
    theta: f64,
    tau: f64,
) -> Result<ChainReport> {
    if !(mult.gamma > 0.0 && mult.small_m > 0.0 && mult.big_m > 0.0) {
        return Err(Error::Inadmissible("the chain needs gamma, m, M > 0".into()));
    }
    let n = norms;
    let (k, w) = (groups.kappa_s, n.omega);
    let (gm, mm) = (mult.gamma / mult.big_m, mult.small_m / mult.big_m);
    let (fu, le) = (n.f * n.u, n.ell.sqrt() * n.eps_gamma);
    let korn_term = 2.0 * k / w * n.f * n.mu_min.sqrt() * n.grad;
    let (p, q) = chain_coefficients(groups, mult, d, theta, tau);
    let wu = w * w * n.u;

    let t1 = [
        ("mass", 2.0 * gm * wu * n.u),
        ("boundary_strain", 2.0 * mm * n.ell * n.eps_gamma.powi(2)),
        ("load", ((d as f64 - 2.0 + mult.epsilon) / mult.big_m + groups.zeta + k / groups.alpha_min) * fu),
        ("korn", korn_term),
        ("robin", groups.c_rob * k.sqrt() * n.impedance * le),
    ];
    let morawetz =
        IdentityReport::inequality("morawetz_estimate", t1[0].1 + t1[1].1, t1[2].1 + t1[3].1 + t1[4].1, &t1, CHAIN_TOL);

    let t2 = [
        ("korn", korn_term),
        ("load_sq", p * n.f * n.f / (w * w)),
        ("load", (std::f64::consts::SQRT_2 * k.powf(theta) + 2.0 * k) * fu),
        ("robin", 2.0 * k.powf(tau) * n.impedance * le),
    ];
    let korn = IdentityReport::inequality("korn_rhs", t2[0].1, t2[1].1 + t2[2].1 + t2[3].1, &t2, CHAIN_TOL);

    let t3 = [("mass", 2.0 * gm * wu * n.u), ("load_sq", p * n.f * n.f / (w * w)), ("load", q * fu)];
    let combined = IdentityReport::inequality("combined", t3[0].1, t3[1].1 + t3[2].1, &t3, CHAIN_TOL);

    let t4 = [("mass", 2.0 * gm * wu), ("root", (2.0 * gm * p).sqrt() * n.f), ("load", q * n.f)];
    let quadratic = IdentityReport::inequality("quadratic", t4[0].1, t4[1].1 + t4[2].1, &t4, CHAIN_TOL);

    let bracket = SimpleRobinTerms::new(groups, mult, d, SixthRootTerm::SqrtChi)?.bracket(k);
    let t5 = [("mass", gm * wu), ("bound", bracket * n.f)];
    let stability = IdentityReport::inequality("stability_estimate", t5[0].1, t5[1].1, &t5, CHAIN_TOL);

    let links = vec![morawetz, korn, combined, quadratic, stability];
    let pass = links.iter().all(|l| l.pass);
    Ok(ChainReport {
        theta,
        tau,
        norms: *n,
        links,
        constant: chain_constant(groups, mult, d, theta, tau),
        final_bound: bracket / gm,
        pass,
    })
}

/// Chain audit on the worst-case load of one sweep row: the converged
/// power-iteration vector at frequency `omega` and `λ/μ = ratio`.
pub fn chain_for_sweep_row(spec: &SweepSpec, omega: f64, ratio: f64, theta: f64, tau: f64) -> Result<ChainReport> {
    spec.validate()?;
    let material = MaterialField::homogeneous(spec.rho, spec.mu, ratio * spec.mu)?;
    let (alpha_t, alpha_n) = spec.alphas(ratio);
    let robin = RobinSpec::from_alphas(alpha_t, alpha_n, &material)?;
    let domain = DomainSpec::annulus(2, spec.r_in, spec.ell)?;
    let mult = MultiplierSpec::identity(2);
    let groups = derive_groups(&material, &domain, &robin, &mult, omega)?;
    let mesh = spec.mesh(omega)?;
    let system = assemble(&mesh, &material, &robin, omega)?;
    let p = power_iteration(&system, spec.iters, spec.seed, POWER_TOL)?;
    let f = system.extend(&p.load);
    let u = solve(&system, &f)?;
    let norms = ChainNorms::from_solution(&mesh, &material, &system, &u, &f)?;
    estimate_chain_audit(&norms, &groups, &mult, 2, theta, tau)
}
