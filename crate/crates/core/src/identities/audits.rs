use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::field::{Gradient, Vector};
use super::samples::{Part, Samples, SurfacePoint, VolumePoint};
use crate::fem::{AssembledSystem, SolveResult};
use crate::model::{DimensionlessGroups, MaterialField, MultiplierKind, MultiplierSpec, Profile, RobinSpec};
use crate::{Error, Result};

/// Guard below which `𝒱_h(φ)` is taken as zero, relative to `max φ`.
pub const VANISHING_GUARD: f64 = 1e-14;
pub const GARDING_TOL: f64 = 1e-10;
pub const KORN_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    /// `lhs = rhs`.
    Equality,
    /// `lhs ≤ rhs`.
    Inequality,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub kind: ReportKind,
    pub lhs: f64,
    pub rhs: f64,
    /// Largest magnitude among the constituent terms.
    pub scale: f64,
    pub rel_gap: f64,
    /// `rhs − lhs` for inequalities, `−|lhs − rhs|` for equalities.
    pub slack: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub terms: Vec<Term>,
}

fn scale_of(terms: &[(&str, f64)], extra: &[f64]) -> f64 {
    terms.iter().map(|t| t.1.abs()).chain(extra.iter().map(|v| v.abs())).fold(0.0, f64::max)
}

fn to_terms(terms: &[(&str, f64)]) -> Vec<Term> {
    terms.iter().map(|(n, v)| Term { name: n.to_string(), value: *v }).collect()
}

impl IdentityReport {
    /// `gap` is the distance between both sides; it differs from
    /// `|lhs − rhs|` only for complex identities.
    pub fn equality(name: &str, lhs: f64, rhs: f64, gap: f64, terms: &[(&str, f64)], tolerance: f64) -> Self {
        let scale = scale_of(terms, &[lhs, rhs]);
        let rel_gap = if scale > 0.0 { gap / scale } else { 0.0 };
        Self {
            name: name.into(),
            kind: ReportKind::Equality,
            lhs,
            rhs,
            scale,
            rel_gap,
            slack: -gap,
            tolerance,
            pass: rel_gap <= tolerance,
            terms: to_terms(terms),
        }
    }

    pub fn inequality(name: &str, lhs: f64, rhs: f64, terms: &[(&str, f64)], tolerance: f64) -> Self {
        let scale = scale_of(terms, &[lhs, rhs]);
        let slack = rhs - lhs;
        let rel_gap = if scale > 0.0 { (-slack).max(0.0) / scale } else { 0.0 };
        Self {
            name: name.into(),
            kind: ReportKind::Inequality,
            lhs,
            rhs,
            scale,
            rel_gap,
            slack,
            tolerance,
            pass: slack >= -tolerance * scale,
            terms: to_terms(terms),
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }

    /// Turn a failed report into an accuracy error.
    pub fn require(self) -> Result<Self> {
        if self.pass {
            Ok(self)
        } else {
            Err(Error::Accuracy { what: self.name.clone(), achieved: self.rel_gap, target: self.tolerance })
        }
    }
}

// ---------------------------------------------------------------------------
// Pointwise tensor algebra.

fn zero() -> C {
    C::new(0.0, 0.0)
}

pub(crate) fn strain<const D: usize>(g: &Gradient<D>) -> Gradient<D> {
    std::array::from_fn(|j| std::array::from_fn(|l| (g[j][l] + g[l][j]) * 0.5))
}

pub(crate) fn divergence<const D: usize>(g: &Gradient<D>) -> C {
    (0..D).map(|j| g[j][j]).sum()
}

/// `Σ a_jl conj(b_jl)`.
pub(crate) fn frob<const D: usize>(a: &Gradient<D>, b: &Gradient<D>) -> C {
    let mut s = zero();
    for j in 0..D {
        for l in 0..D {
            s += a[j][l] * b[j][l].conj();
        }
    }
    s
}

/// `Σ a_l conj(b_l)`.
pub(crate) fn vdot<const D: usize>(a: &Vector<D>, b: &Vector<D>) -> C {
    (0..D).map(|l| a[l] * b[l].conj()).sum()
}

pub(crate) fn norm_sq<const D: usize>(a: &Vector<D>) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum()
}

pub(crate) fn grad_norm_sq<const D: usize>(g: &Gradient<D>) -> f64 {
    g.iter().flatten().map(|v| v.norm_sqr()).sum()
}

/// `(h·∇)v` with `(h·∇v)_l = Σ_j h_j ∂_j v_l`.
pub(crate) fn directional<const D: usize>(g: &Gradient<D>, h: &[f64; D]) -> Vector<D> {
    std::array::from_fn(|l| (0..D).map(|j| g[j][l] * h[j]).sum())
}

pub(crate) fn stress<const D: usize>(g: &Gradient<D>, mu: f64, lambda: f64) -> Gradient<D> {
    let e = strain(g);
    let div = divergence(g);
    std::array::from_fn(|j| std::array::from_fn(|l| e[j][l] * (2.0 * mu) + if j == l { div * lambda } else { zero() }))
}

pub(crate) fn mat_vec<const D: usize>(a: &Gradient<D>, n: &[f64; D]) -> Vector<D> {
    std::array::from_fn(|l| (0..D).map(|j| a[l][j] * n[j]).sum())
}

fn real_dot<const D: usize>(a: &[f64; D], b: &[f64; D]) -> f64 {
    (0..D).map(|j| a[j] * b[j]).sum()
}

fn normal_part<const D: usize>(v: &Vector<D>, n: &[f64; D]) -> C {
    (0..D).map(|j| v[j] * n[j]).sum()
}

/// `A v = a_T v_T + a_N (v·n) n`.
pub(crate) fn impedance<const D: usize>(v: &Vector<D>, n: &[f64; D], robin: &RobinSpec) -> Vector<D> {
    let vn = normal_part(v, n);
    std::array::from_fn(|l| (v[l] - vn * n[l]) * robin.a_t + vn * n[l] * robin.a_n)
}

/// `𝒱_h(φ) = (h·∇φ)/φ` for `h = x`, zero where `φ` vanishes.
pub fn log_derivative(profile: &Profile, phi_max: f64, x: &[f64]) -> Result<f64> {
    let phi = profile.at(x);
    if phi.abs() <= VANISHING_GUARD * phi_max.abs() {
        return Ok(0.0);
    }
    let g =
        profile.gradient(x).ok_or_else(|| Error::Inadmissible("coefficient is not differentiable along h".into()))?;
    Ok(x.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() / phi)
}

fn require_identity(mult: &MultiplierSpec) -> Result<()> {
    match mult.kind {
        MultiplierKind::Identity => Ok(()),
        _ => Err(Error::Inadmissible("identity audits are implemented for h = x only".into())),
    }
}

fn sum_volume<const D: usize, F: Fn(&VolumePoint<D>) -> f64>(s: &Samples<D>, f: F) -> f64 {
    s.volume.iter().map(|p| p.w * f(p)).sum()
}

fn sum_volume_res<const D: usize, F: Fn(&VolumePoint<D>) -> Result<f64>>(s: &Samples<D>, f: F) -> Result<f64> {
    s.volume.iter().map(|p| Ok(p.w * f(p)?)).sum()
}

fn sum_surface<const D: usize, F: Fn(&SurfacePoint<D>) -> f64>(s: &Samples<D>, part: Part, f: F) -> f64 {
    s.surface.iter().filter(|p| p.part == part).map(|p| p.w * f(p)).sum()
}

// ---------------------------------------------------------------------------
// Energy identities of the discrete system.

/// Real and imaginary energy balances obtained by testing the discrete
/// problem with its own solution.
pub fn garding_audit(
    system: &AssembledSystem,
    result: &SolveResult,
    f: &[C],
) -> Result<(IdentityReport, IdentityReport)> {
    let n = system.stiffness.n;
    if result.u.len() != n || f.len() != n {
        return Err(Error::Mesh("vector length does not match the system".into()));
    }
    let u = system.extend(&system.restrict(&result.u));
    let omega = system.omega;
    let energy = system.stiffness.quad(&u);
    let mass = system.mass.quad(&u);
    let load = system.mass.form(&u, f);
    let diss = system.robin.quad(&u);
    let real_terms = [("energy", energy), ("load_re", load.re), ("omega2_mass", omega * omega * mass)];
    let real_rhs = load.re + omega * omega * mass;
    let real =
        IdentityReport::equality("garding_real", energy, real_rhs, (energy - real_rhs).abs(), &real_terms, GARDING_TOL);
    let imag_lhs = omega * diss;
    let imag_terms = [("omega_dissipation", imag_lhs), ("load_im", load.im)];
    let imag = IdentityReport::equality(
        "garding_imag",
        imag_lhs,
        -load.im,
        (imag_lhs + load.im).abs(),
        &imag_terms,
        GARDING_TOL,
    );
    Ok((real, imag))
}

// ---------------------------------------------------------------------------
// Multiplier identities for h = x.

/// Pieces shared by the Rellich and Morawetz identities.
struct RellichTerms {
    r_omega: f64,
    b_dir: f64,
    b_diss: f64,
    r_diss: f64,
}

fn rellich_terms<const D: usize>(s: &Samples<D>, material: &MaterialField) -> Result<RellichTerms> {
    let d = D as f64;
    let r_omega = sum_volume_res(s, |p| {
        let (mu, lam) = (material.mu_at(&p.x), material.lambda_at(&p.x));
        let vm = log_derivative(&material.mu, material.mu_max, &p.x)?;
        let vl = log_derivative(&material.lambda, material.lambda_max, &p.x)?;
        let e = strain(&p.grad);
        let div = divergence(&p.grad);
        let first = (d + vm) * 2.0 * mu * frob(&e, &e).re + (d + vl) * lam * div.norm_sqr();
        // ∇h = I: ε:(∇v̄) and (∇h):(∇v̄)ᵀ = div v̄
        let second = (frob(&e, &p.grad) * (2.0 * mu) + div * div.conj() * lam).re;
        Ok(first - 2.0 * second)
    })?;
    let boundary = |part: Part, with_traction: bool| {
        sum_surface(s, part, |p| {
            let (mu, lam) = (material.mu_at(&p.x), material.lambda_at(&p.x));
            let sig = stress(&p.grad, mu, lam);
            let hn = real_dot(&p.x, &p.n);
            let mut val = hn * frob(&sig, &strain(&p.grad)).re;
            if with_traction {
                val -= 2.0 * vdot(&mat_vec(&sig, &p.n), &directional(&p.grad, &p.x)).re;
            }
            val
        })
    };
    let b_dir = boundary(Part::Dirichlet, true);
    let b_diss = boundary(Part::Dissipative, false);
    let r_diss = sum_surface(s, Part::Dissipative, |p| {
        let sig = stress(&p.grad, material.mu_at(&p.x), material.lambda_at(&p.x));
        2.0 * vdot(&mat_vec(&sig, &p.n), &directional(&p.grad, &p.x)).re
    });
    Ok(RellichTerms { r_omega, b_dir, b_diss, r_diss })
}

fn reject_other_parts<const D: usize>(s: &Samples<D>) -> Result<()> {
    if s.surface.iter().any(|p| p.part == Part::Other) {
        return Err(Error::UnsupportedDomain("every boundary part must be Dirichlet or dissipative".into()));
    }
    Ok(())
}

/// `−2Re(div σ(v), (h·∇)v) = −ℛ_Ω − ℛ_Diss + ℬ_Dir + ℬ_Diss`.
pub fn rellich_audit<const D: usize>(
    s: &Samples<D>,
    mult: &MultiplierSpec,
    material: &MaterialField,
) -> Result<IdentityReport> {
    require_identity(mult)?;
    reject_other_parts(s)?;
    let lhs = sum_volume_res(s, |p| {
        let ds =
            p.div_sigma.ok_or_else(|| Error::Inadmissible("div σ(v) is only available for analytic fields".into()))?;
        Ok(-2.0 * vdot(&ds, &directional(&p.grad, &p.x)).re)
    })?;
    let t = rellich_terms(s, material)?;
    let rhs = -t.r_omega - t.r_diss + t.b_dir + t.b_diss;
    let terms = [("lhs", lhs), ("r_omega", t.r_omega), ("r_diss", t.r_diss), ("b_dir", t.b_dir), ("b_diss", t.b_diss)];
    Ok(IdentityReport::equality("rellich", lhs, rhs, (lhs - rhs).abs(), &terms, s.class.tolerance()))
}

/// Closed form of `ℛ_Ω` for `h = x` and constant coefficients,
/// `(d−2)∫{2μ|ε(v)|² + λ|div v|²}`, compared with the general expression.
pub fn rellich_specialization_audit<const D: usize>(
    s: &Samples<D>,
    mult: &MultiplierSpec,
    material: &MaterialField,
) -> Result<IdentityReport> {
    require_identity(mult)?;
    if !material.is_constant() {
        return Err(Error::Inadmissible("the specialization assumes constant coefficients".into()));
    }
    let general = rellich_terms(s, material)?.r_omega;
    let energy = sum_volume(s, |p| {
        let e = strain(&p.grad);
        2.0 * material.mu_at(&p.x) * frob(&e, &e).re + material.lambda_at(&p.x) * divergence(&p.grad).norm_sqr()
    });
    let special = (D as f64 - 2.0) * energy;
    let terms = [("r_omega", general), ("energy", energy)];
    Ok(IdentityReport::equality(
        "rellich_specialization",
        general,
        special,
        (general - special).abs(),
        &terms,
        s.class.tolerance(),
    ))
}

/// `−2Re∫ρ v·(h·∇)v̄ = ∫(div h + 𝒱_h(ρ))ρ|v|² − ∮(h·n)ρ|v|²`.
pub fn mass_identity_audit<const D: usize>(
    s: &Samples<D>,
    mult: &MultiplierSpec,
    material: &MaterialField,
) -> Result<IdentityReport> {
    require_identity(mult)?;
    let lhs = sum_volume(s, |p| -2.0 * material.rho_at(&p.x) * vdot(&p.v, &directional(&p.grad, &p.x)).re);
    let volume = sum_volume_res(s, |p| {
        let vr = log_derivative(&material.rho, material.rho_max, &p.x)?;
        Ok((D as f64 + vr) * material.rho_at(&p.x) * norm_sq(&p.v))
    })?;
    let surface: f64 =
        s.surface.iter().map(|p| p.w * real_dot(&p.x, &p.n) * material.rho_at(&p.x) * norm_sq(&p.v)).sum();
    let rhs = volume - surface;
    let terms = [("lhs", lhs), ("volume", volume), ("surface", surface)];
    Ok(IdentityReport::equality("mass", lhs, rhs, (lhs - rhs).abs(), &terms, s.class.tolerance()))
}

/// Seven-term Morawetz identity for a solution of `−ω²ρu − div σ(u) = ρf`
/// vanishing on the Dirichlet boundary. `tolerance` overrides the class
/// tolerance (discrete fields only satisfy it up to discretization error).
pub fn morawetz_audit<const D: usize>(
    s: &Samples<D>,
    mult: &MultiplierSpec,
    material: &MaterialField,
    omega: f64,
    tolerance: Option<f64>,
) -> Result<IdentityReport> {
    require_identity(mult)?;
    reject_other_parts(s)?;
    let w2 = omega * omega;
    let mass = sum_volume_res(s, |p| {
        let vr = log_derivative(&material.rho, material.rho_max, &p.x)?;
        Ok((D as f64 + vr) * material.rho_at(&p.x) * norm_sq(&p.v))
    })?;
    let load = sum_volume_res(s, |p| {
        let f = p.f.ok_or_else(|| Error::Inadmissible("the Morawetz audit needs the load f".into()))?;
        Ok(2.0 * material.rho_at(&p.x) * vdot(&f, &directional(&p.grad, &p.x)).re)
    })?;
    let diss_mass = sum_surface(s, Part::Dissipative, |p| real_dot(&p.x, &p.n) * material.rho_at(&p.x) * norm_sq(&p.v));
    let t = rellich_terms(s, material)?;
    let lhs = w2 * mass + t.b_diss + t.b_dir;
    let rhs = load + w2 * diss_mass + t.r_diss + t.r_omega;
    let terms = [
        ("omega2_mass", w2 * mass),
        ("b_diss", t.b_diss),
        ("b_dir", t.b_dir),
        ("load", load),
        ("omega2_diss_mass", w2 * diss_mass),
        ("r_diss", t.r_diss),
        ("r_omega", t.r_omega),
    ];
    let tol = tolerance.unwrap_or_else(|| s.class.tolerance());
    Ok(IdentityReport::equality("morawetz", lhs, rhs, (lhs - rhs).abs(), &terms, tol))
}

/// Tangential divergence `∇_T·v_T` on a sphere of radius `r` with outward
/// normal `n`.
pub(crate) fn tangential_divergence<const D: usize>(g: &Gradient<D>, v: &Vector<D>, n: &[f64; D], r: f64) -> C {
    let dn = directional(g, n);
    divergence(g) - normal_part(&dn, n) - normal_part(v, n) * ((D as f64 - 1.0) / r)
}

/// Five-term identity on the dissipative sphere:
/// `(Av,(h·∇)v) = 2(Av,hε) + (Av,(∇h)v) + a_T((h·n)∇_T·v_T, v·n)
///  − a_N((n·∇)h (v·n), v) − a_N((h·n)(v·n), ε n·n)`.
pub fn robin_identity_audit<const D: usize>(
    s: &Samples<D>,
    mult: &MultiplierSpec,
    robin: &RobinSpec,
) -> Result<IdentityReport> {
    require_identity(mult)?;
    let mut sums = [zero(); 6];
    for p in s.surface.iter().filter(|p| p.part == Part::Dissipative) {
        let av = impedance(&p.v, &p.n, robin);
        let e = strain(&p.grad);
        let hn = real_dot(&p.x, &p.n);
        let vn = normal_part(&p.v, &p.n);
        // (hε)_l = Σ_j h_j ε_jl; ∇h = I and (n·∇)h = n
        let he: Vector<D> = std::array::from_fn(|l| (0..D).map(|j| e[j][l] * p.x[j]).sum());
        let enn = normal_part(&mat_vec(&e, &p.n), &p.n);
        let divt = tangential_divergence(&p.grad, &p.v, &p.n, s.ell);
        let vals = [
            vdot(&av, &directional(&p.grad, &p.x)),
            vdot(&av, &he) * 2.0,
            vdot(&av, &p.v),
            divt * vn.conj() * (robin.a_t * hn),
            -(vn * vdot(&p.n.map(|c| C::new(c, 0.0)), &p.v)) * robin.a_n,
            -(vn * enn.conj()) * (robin.a_n * hn),
        ];
        for (acc, v) in sums.iter_mut().zip(vals) {
            *acc += v * p.w;
        }
    }
    let lhs = sums[0];
    let rhs: C = sums[1..].iter().sum();
    let names = ["lhs", "a_h_eps", "a_grad_h", "a_t_tangential", "a_n_normal", "a_n_strain"];
    let terms: Vec<(&str, f64)> = names.iter().zip(&sums).map(|(n, v)| (*n, v.norm())).collect();
    Ok(IdentityReport::equality("robin_identity", lhs.re, rhs.re, (lhs - rhs).norm(), &terms, s.class.tolerance()))
}

// ---------------------------------------------------------------------------
// Inequalities.

/// Basic and coefficient-weighted Korn inequalities for a field vanishing on
/// the Dirichlet boundary, with a spherical dissipative boundary of radius
/// `ℓ` (`β_T = 1`, `β_N = d − 1`).
pub fn korn_audit<const D: usize>(
    s: &Samples<D>,
    material: &MaterialField,
    robin: &RobinSpec,
    groups: &DimensionlessGroups,
) -> Result<(IdentityReport, IdentityReport)> {
    let ell = s.ell;
    let (beta_t, beta_n) = (1.0, D as f64 - 1.0);
    let grad_sq = sum_volume(s, |p| grad_norm_sq(&p.grad));
    let eps_sq = sum_volume(s, |p| {
        let e = strain(&p.grad);
        frob(&e, &e).re
    });
    let eps_mu_sq = sum_volume(s, |p| {
        let e = strain(&p.grad);
        material.mu_at(&p.x) * frob(&e, &e).re
    });
    let diss = |f: &dyn Fn(&SurfacePoint<D>) -> f64| sum_surface(s, Part::Dissipative, f);
    let vn_sq = diss(&|p| normal_part(&p.v, &p.n).norm_sqr());
    let vt_sq = diss(&|p| norm_sq(&p.v)) - vn_sq;
    let divt_sq = diss(&|p| tangential_divergence(&p.grad, &p.v, &p.n, ell).norm_sqr());
    let a_sq = diss(&|p| vdot(&impedance(&p.v, &p.n, robin), &p.v).re);
    let eps_mu_gamma_sq = diss(&|p| {
        let e = strain(&p.grad);
        material.mu_at(&p.x) * frob(&e, &e).re
    });

    let basic_terms = [
        ("grad_sq", grad_sq),
        ("two_eps_sq", 2.0 * eps_sq),
        ("curvature", (beta_t * vt_sq + beta_n * vn_sq) / ell),
        ("cross", 2.0 * vn_sq.sqrt() * divt_sq.sqrt()),
    ];
    let basic_rhs: f64 = basic_terms[1..].iter().map(|t| t.1).sum();
    let basic = IdentityReport::inequality("korn_basic", grad_sq, basic_rhs, &basic_terms, KORN_TOL);

    let speed = material.wave_speeds().theta_s_min() / ell;
    let weighted_terms = [
        ("mu_min_grad_sq", material.mu_min * grad_sq),
        ("two_eps_mu_sq", 2.0 * eps_mu_sq),
        ("impedance", groups.chi * speed * a_sq),
        ("cross", 2.0 / groups.alpha_n.sqrt() * speed.sqrt() * a_sq.sqrt() * ell.sqrt() * eps_mu_gamma_sq.sqrt()),
    ];
    let weighted_rhs: f64 = weighted_terms[1..].iter().map(|t| t.1).sum();
    let weighted =
        IdentityReport::inequality("korn_weighted", material.mu_min * grad_sq, weighted_rhs, &weighted_terms, KORN_TOL);
    Ok((basic, weighted))
}

/// `ℬ_Dir ≥ 0` for fields vanishing on the Dirichlet boundary with
/// `h·n ≤ 0` there, together with its closed form
/// `−∫(h·n){μ|∂_n v_T|² + (2μ+λ)|∂_n v·n|²}`.
pub fn dirichlet_audit<const D: usize>(
    s: &Samples<D>,
    mult: &MultiplierSpec,
    material: &MaterialField,
) -> Result<(IdentityReport, IdentityReport)> {
    require_identity(mult)?;
    let b_dir = rellich_terms(s, material)?.b_dir;
    let closed = sum_surface(s, Part::Dirichlet, |p| {
        let (mu, lam) = (material.mu_at(&p.x), material.lambda_at(&p.x));
        let dn = directional(&p.grad, &p.n);
        let dnn = normal_part(&dn, &p.n);
        let dt_sq = norm_sq(&dn) - dnn.norm_sqr();
        -real_dot(&p.x, &p.n) * (mu * dt_sq + (2.0 * mu + lam) * dnn.norm_sqr())
    });
    let terms = [("b_dir", b_dir), ("closed_form", closed)];
    let identity =
        IdentityReport::equality("dirichlet_form", b_dir, closed, (b_dir - closed).abs(), &terms, s.class.tolerance());
    let sign = IdentityReport::inequality("dirichlet_sign", 0.0, b_dir, &terms, s.class.tolerance());
    Ok((identity, sign))
}
