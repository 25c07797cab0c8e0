use std::f64::consts::PI;

use elastab::fem::{assemble, build_annulus_mesh, interpolate, solve, SweepSpec};
use elastab::identities::*;
use elastab::model::{derive_groups, DomainSpec, MaterialField, MultiplierSpec, Profile, RobinSpec};
use elastab::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Outcome;
use crate::output::to_value;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Garding,
    Rellich,
    Mass,
    Morawetz,
    Korn,
    Robin,
    Chain,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Garding, Suite::Rellich, Suite::Mass, Suite::Morawetz, Suite::Korn, Suite::Robin, Suite::Chain];

    fn index(self) -> u64 {
        Self::EACH.iter().position(|s| *s == self).unwrap_or(0) as u64
    }
}

fn korn_fields() -> usize {
    100
}

fn garding_solves() -> usize {
    10
}

fn chain_sweep() -> SweepSpec {
    SweepSpec { kappas: vec![1.0, 2.0, 4.0, 8.0], ..Default::default() }
}

/// `identity-check` configuration; every field is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityConfig {
    #[serde(default = "korn_fields")]
    pub korn_fields: usize,
    #[serde(default = "garding_solves")]
    pub garding_solves: usize,
    /// Rows on which the estimate chain is audited.
    #[serde(default = "chain_sweep")]
    pub chain: SweepSpec,
    #[serde(default)]
    pub seed: u64,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn material() -> MaterialField {
    MaterialField::homogeneous(1.3, 0.8, 2.1).expect("valid material")
}

fn annulus(d: usize) -> DomainSpec {
    DomainSpec::annulus(d, 0.5, 1.0).expect("valid annulus")
}

fn named(mut r: IdentityReport, name: String) -> IdentityReport {
    r.name = name;
    r
}

fn crossing(a: PlaneWave<2>, b: PlaneWave<2>) -> Superposition<2> {
    Superposition { parts: vec![Box::new(a), Box::new(b)] }
}

fn vanishing(rng: &mut ChaCha8Rng, degree: u32) -> Vanishing<2> {
    Vanishing::new(0.5, Box::new(Polynomial::<2>::random(rng, degree, 1.0)))
}

fn garding(cfg: &IdentityConfig, rng: &mut ChaCha8Rng) -> elastab::Result<Vec<IdentityReport>> {
    let mat = MaterialField::homogeneous(1.0, 1.0, 3.0)?;
    let robin = RobinSpec::from_alphas(1.0, 2.0, &mat)?;
    let mesh = build_annulus_mesh(0.5, 1.0, 6, 32, 2)?;
    let mut out = Vec::new();
    for i in 0..cfg.garding_solves {
        let omega = rng.gen_range(0.5..8.0);
        let sys = assemble(&mesh, &mat, &robin, omega)?;
        let f: Vec<C> = (0..mesh.n_dofs()).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let u = solve(&sys, &f)?;
        let (re, im) = garding_audit(&sys, &u, &f)?;
        out.push(named(re, format!("garding.real.solve_{i}")));
        out.push(named(im, format!("garding.imag.solve_{i}")));
    }
    Ok(out)
}

fn rellich(rng: &mut ChaCha8Rng) -> elastab::Result<Vec<IdentityReport>> {
    let mat = material();
    let mut out = Vec::new();
    for degree in 1..=3 {
        let v = Polynomial::<2>::random(rng, degree, 1.0);
        let s = sample_analytic(&v, &annulus(2), &mat, None, Resolution::new(8, 24))?;
        let id = MultiplierSpec::identity(2);
        out.push(named(rellich_audit(&s, &id, &mat)?, format!("rellich.polynomial_2d_degree_{degree}")));
        out.push(named(
            rellich_specialization_audit(&s, &id, &mat)?,
            format!("rellich.specialization_2d_degree_{degree}"),
        ));
        let v3 = Polynomial::<3>::random(rng, degree, 1.0);
        let s3 = sample_analytic(&v3, &annulus(3), &mat, None, Resolution::new(8, 10))?;
        out.push(named(
            rellich_audit(&s3, &MultiplierSpec::identity(3), &mat)?,
            format!("rellich.polynomial_3d_degree_{degree}"),
        ));
    }
    let waves = crossing(PlaneWave::shear([1.0, 0.0], 3.0), PlaneWave::pressure([0.0, 1.0], 2.0));
    let s = sample_analytic(&waves, &annulus(2), &mat, None, Resolution::new(10, 64))?;
    out.push(named(rellich_audit(&s, &MultiplierSpec::identity(2), &mat)?, "rellich.crossing_waves".into()));
    for i in 0..3 {
        let v = vanishing(rng, 2);
        let s = sample_analytic(&v, &annulus(2), &mat, None, Resolution::new(4, 24))?;
        let (form, sign) = dirichlet_audit(&s, &MultiplierSpec::identity(2), &mat)?;
        out.push(named(form, format!("rellich.dirichlet_form_{i}")));
        out.push(named(sign, format!("rellich.dirichlet_sign_{i}")));
    }
    Ok(out)
}

fn mass(rng: &mut ChaCha8Rng) -> elastab::Result<Vec<IdentityReport>> {
    let mat = material();
    let id = MultiplierSpec::identity(2);
    let mut out = Vec::new();
    let constant = Polynomial::<2>::constant([c(1.0, -1.0), c(2.0, 0.0)]);
    let s = sample_analytic(&constant, &DomainSpec::ball(2, 1.0)?, &mat, None, Resolution::new(4, 16))?;
    out.push(named(mass_identity_audit(&s, &id, &mat)?, "mass.constant_field".into()));
    let rho = Profile::RadialPower { base: 1.2, coeff: 1.0, power: 2.0, radius: 1.0 };
    let varying = MaterialField::new(rho, Profile::constant(1.0), Profile::constant(1.0), 0.0, 1.0)?;
    for degree in 1..=3 {
        let w = Polynomial::<2>::random(rng, degree, 1.0);
        let s = sample_analytic(&w, &annulus(2), &varying, None, Resolution::new(8, 24))?;
        out.push(named(mass_identity_audit(&s, &id, &varying)?, format!("mass.radial_density_degree_{degree}")));
    }
    let wave = crossing(PlaneWave::shear([0.0, 1.0], 5.0), PlaneWave::pressure([0.8, 0.6], 3.0));
    let s = sample_analytic(&wave, &annulus(2), &varying, None, Resolution::new(12, 64))?;
    out.push(named(mass_identity_audit(&s, &id, &varying)?, "mass.crossing_waves".into()));
    let bump = RadialBump::<2> { center: [0.0, 0.75], radius: 0.2, amplitude: [c(1.0, 0.5), c(0.0, 1.0)] };
    let s = sample_analytic(&bump, &annulus(2), &mat, None, Resolution::new(40, 256))?;
    out.push(named(mass_identity_audit(&s, &id, &mat)?, "mass.interior_bump".into()));
    Ok(out)
}

fn morawetz(rng: &mut ChaCha8Rng) -> elastab::Result<Vec<IdentityReport>> {
    let mat = material();
    let id = MultiplierSpec::identity(2);
    let mut out = Vec::new();
    for omega in [0.5, 2.0, 6.0] {
        let u = vanishing(rng, 2);
        let s = sample_analytic(&u, &annulus(2), &mat, Some(omega), Resolution::new(10, 32))?;
        out.push(named(morawetz_audit(&s, &id, &mat, omega, None)?, format!("morawetz.polynomial_omega_{omega}")));
    }
    let waves = crossing(PlaneWave::shear([1.0, 0.0], 3.0), PlaneWave::pressure([0.6, 0.8], 2.0));
    let wave = Vanishing::new(0.5, Box::new(waves));
    let s = sample_analytic(&wave, &annulus(2), &mat, Some(3.0), Resolution::new(12, 64))?;
    out.push(named(morawetz_audit(&s, &id, &mat, 3.0, None)?, "morawetz.crossing_waves".into()));

    // Discrete solutions satisfy the identity only up to discretization error.
    let unit = MaterialField::homogeneous(1.0, 1.0, 1.0)?;
    let robin = RobinSpec::from_alphas(1.0, 1.0, &unit)?;
    let omega = 2.0;
    let gap = |n_theta: usize| -> elastab::Result<f64> {
        let mesh = build_annulus_mesh(0.5, 1.0, n_theta / 4, n_theta, 2)?;
        let sys = assemble(&mesh, &unit, &robin, omega)?;
        let f = interpolate(&mesh, |x| [c((3.0 * x[0]).sin(), 0.0), c(x[0] * x[1], 0.5)]);
        let u = solve(&sys, &f)?;
        let s = sample_fem(&mesh, &u.u, Some(&f))?;
        Ok(morawetz_audit(&s, &id, &unit, omega, None)?.rel_gap)
    };
    let (g64, g128) = (gap(64)?, gap(128)?);
    out.push(IdentityReport::inequality(
        "morawetz.discrete_refinement",
        g128,
        g64,
        &[("gap_64", g64), ("gap_128", g128)],
        0.0,
    ));
    Ok(out)
}

fn robin(rng: &mut ChaCha8Rng) -> elastab::Result<Vec<IdentityReport>> {
    let mat = material();
    let robin = RobinSpec::new(0.7, 1.9, &mat)?;
    let id = MultiplierSpec::identity(2);
    let mut out = Vec::new();
    let constant = Polynomial::<2>::constant([c(1.0, 0.2), c(-0.4, 0.9)]);
    let s = sample_analytic(&constant, &annulus(2), &mat, None, Resolution::new(2, 16))?;
    out.push(named(robin_identity_audit(&s, &id, &robin)?, "robin.constant_field".into()));
    let rot = Polynomial::<2>::rigid_rotation([[0.0, 1.0], [-1.0, 0.0]])?;
    let s = sample_analytic(&rot, &annulus(2), &mat, None, Resolution::new(2, 16))?;
    out.push(named(robin_identity_audit(&s, &id, &robin)?, "robin.rotation".into()));
    for i in 0..5 {
        let v = Polynomial::<2>::random(rng, 2, 1.0);
        let s = sample_analytic(&v, &annulus(2), &mat, None, Resolution::new(2, 16))?;
        out.push(named(robin_identity_audit(&s, &id, &robin)?, format!("robin.quadratic_2d_{i}")));
        let v3 = Polynomial::<3>::random(rng, 2, 1.0);
        let s3 = sample_analytic(&v3, &DomainSpec::ball(3, 1.0)?, &mat, None, Resolution::new(2, 8))?;
        out.push(named(
            robin_identity_audit(&s3, &MultiplierSpec::identity(3), &robin)?,
            format!("robin.quadratic_3d_{i}"),
        ));
    }
    let wave = PlaneWave::<2>::pressure([1.0, 0.0], 3.0);
    let s = sample_analytic(&wave, &annulus(2), &mat, None, Resolution::new(2, 64))?;
    out.push(named(robin_identity_audit(&s, &id, &robin)?, "robin.pressure_wave".into()));
    Ok(out)
}

fn korn(cfg: &IdentityConfig, rng: &mut ChaCha8Rng) -> elastab::Result<Vec<IdentityReport>> {
    let mat = material();
    let dom = annulus(2);
    let robin = RobinSpec::from_alphas(1.0, 1.0, &mat)?;
    let groups = derive_groups(&mat, &dom, &robin, &MultiplierSpec::identity(2), 1.0)?;
    let mut out = Vec::new();
    for i in 0..cfg.korn_fields {
        let (field, res, label): (Box<dyn AnalyticField<2>>, _, _) = if i % 2 == 0 {
            (Box::new(vanishing(rng, 1 + (i / 2 % 3) as u32)), Resolution::new(8, 32), "polynomial")
        } else {
            let r: f64 = rng.gen_range(0.6..0.9);
            let t = rng.gen_range(0.0..2.0 * PI);
            let rad = rng.gen_range(0.05..(r - 0.5).min(1.0 - r));
            let amplitude = [c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), 0.0)];
            let bump = RadialBump::<2> { center: [r * t.cos(), r * t.sin()], radius: rad, amplitude };
            (Box::new(bump), Resolution::new(40, 256), "bump")
        };
        let s = sample_analytic(field.as_ref(), &dom, &mat, None, res)?;
        let (basic, weighted) = korn_audit(&s, &mat, &robin, &groups)?;
        out.push(named(basic, format!("korn.basic.{label}_{i}")));
        out.push(named(weighted, format!("korn.weighted.{label}_{i}")));
    }
    Ok(out)
}

fn chain(cfg: &IdentityConfig) -> elastab::Result<Vec<IdentityReport>> {
    let spec = &cfg.chain;
    spec.validate()?;
    let cases: Vec<(f64, f64)> =
        spec.omega_list().into_iter().flat_map(|w| spec.lambda_over_mu.iter().map(move |&r| (w, r))).collect();
    let reports: Vec<ChainReport> = cases
        .par_iter()
        .map(|&(w, r)| chain_for_sweep_row(spec, w, r, THETA_STAR, TAU_STAR))
        .collect::<elastab::Result<_>>()?;
    let mut out = Vec::new();
    for ((w, ratio), rep) in cases.iter().zip(reports) {
        let kappa = w * spec.ell / spec.theta_s();
        for l in rep.links {
            let name = format!("chain.kappa_{kappa}.lambda_over_mu_{ratio}.{}", l.name);
            out.push(named(l, name));
        }
    }

    let mat = MaterialField::homogeneous(1.0, 1.0, 1.0)?;
    let robin = RobinSpec::from_alphas(1.0, 1.0, &mat)?;
    let mult = MultiplierSpec::identity(2);
    let groups = derive_groups(&mat, &annulus(2), &robin, &mult, 4.0)?;
    let star = chain_constant(&groups, &mult, 2, THETA_STAR, TAU_STAR);
    let plain = chain_constant(&groups, &mult, 2, 1.0, 0.0);
    out.push(IdentityReport::inequality(
        "chain.starred_exponents_kappa_4",
        star,
        plain,
        &[("starred", star), ("plain", plain)],
        0.0,
    ));
    Ok(out)
}

/// Reports of one suite; `All` runs every suite in order. Each suite draws
/// from its own stream seeded with `seed + index`.
pub fn suite_reports(suite: Suite, cfg: &IdentityConfig) -> elastab::Result<Vec<IdentityReport>> {
    if suite == Suite::All {
        let mut out = Vec::new();
        for s in Suite::EACH {
            out.extend(suite_reports(s, cfg)?);
        }
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(suite.index()));
    match suite {
        Suite::Garding => garding(cfg, &mut rng),
        Suite::Rellich => rellich(&mut rng),
        Suite::Mass => mass(&mut rng),
        Suite::Morawetz => morawetz(&mut rng),
        Suite::Korn => korn(cfg, &mut rng),
        Suite::Robin => robin(&mut rng),
        Suite::Chain => chain(cfg),
        Suite::All => unreachable!(),
    }
}

pub fn run(suite: Suite, cfg: &IdentityConfig) -> Result<Outcome, CliError> {
    let reports = suite_reports(suite, cfg).map_err(CliError::from_core)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    let summary = if failed.is_empty() {
        format!("{} reports, all pass", reports.len())
    } else {
        format!("{} reports, {} failed: {}", reports.len(), failed.len(), failed.join(", "))
    };
    Ok(Outcome {
        tables: vec![("identity_reports".into(), reports.iter().map(to_value).collect::<Result<_, _>>()?)],
        pass: failed.is_empty(),
        summary,
    })
}
