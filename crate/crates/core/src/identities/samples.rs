use std::f64::consts::PI;

use num_complex::Complex64 as C;

use super::field::{div_sigma, AnalyticField, FieldClass, Gradient, Vector};
use crate::fem::element::{cell_points, edge_points};
use crate::fem::{EdgeTag, Mesh, EDGE_GAUSS};
use crate::model::{BoundaryPart, DomainSpec, MaterialField, Shape};
use crate::quad::gauss_on;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Dirichlet,
    Dissipative,
    /// Boundary without a condition, e.g. a free inner sphere.
    Other,
}

#[derive(Clone, Debug)]
pub struct VolumePoint<const D: usize> {
    pub x: [f64; D],
    pub w: f64,
    pub v: Vector<D>,
    pub grad: Gradient<D>,
    pub div_sigma: Option<Vector<D>>,
    pub f: Option<Vector<D>>,
}

#[derive(Clone, Debug)]
pub struct SurfacePoint<const D: usize> {
    pub x: [f64; D],
    pub w: f64,
    pub n: [f64; D],
    pub part: Part,
    pub v: Vector<D>,
    pub grad: Gradient<D>,
}

/// A field with its first derivatives at volume and surface quadrature
/// points, shared by analytic and discrete audits.
#[derive(Clone, Debug)]
pub struct Samples<const D: usize> {
    pub volume: Vec<VolumePoint<D>>,
    pub surface: Vec<SurfacePoint<D>>,
    pub class: FieldClass,
    /// Radius of the dissipative sphere.
    pub ell: f64,
}

/// Tensor rule on the unit sphere: trapezoid in angle (and Gauss in
/// `cos θ` for `D = 3`).
pub fn sphere_rule<const D: usize>(n: usize) -> Result<Vec<([f64; D], f64)>> {
    let mut out = Vec::new();
    match D {
        2 => {
            for j in 0..n {
                let t = 2.0 * PI * j as f64 / n as f64;
                let mut s = [0.0; D];
                s[0] = t.cos();
                s[1] = t.sin();
                out.push((s, 2.0 * PI / n as f64));
            }
        }
        3 => {
            for (z, wz) in gauss_on(n, -1.0, 1.0) {
                let rho = (1.0 - z * z).sqrt();
                for j in 0..2 * n {
                    let p = PI * j as f64 / n as f64;
                    let mut s = [0.0; D];
                    s[0] = rho * p.cos();
                    s[1] = rho * p.sin();
                    s[2] = z;
                    out.push((s, wz * PI / n as f64));
                }
            }
        }
        _ => return Err(Error::UnsupportedDomain(format!("dimension {D}"))),
    }
    Ok(out)
}

/// Quadrature resolution for analytic sampling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Resolution {
    pub n_r: usize,
    pub n_angle: usize,
}

impl Resolution {
    pub fn new(n_r: usize, n_angle: usize) -> Self {
        Self { n_r, n_angle }
    }
}

fn part_of(domain: &DomainSpec, p: BoundaryPart) -> Part {
    if domain.gamma_dir.contains(&p) {
        Part::Dirichlet
    } else if domain.gamma_diss.contains(&p) {
        Part::Dissipative
    } else {
        Part::Other
    }
}

/// Sample an analytic field on a ball or spherical annulus. `div σ` is
/// filled for constant coefficients and `f = (−ω²ρv − div σ)/ρ` when
/// `omega` is given.
pub fn sample_analytic<const D: usize>(
    field: &dyn AnalyticField<D>,
    domain: &DomainSpec,
    material: &MaterialField,
    omega: Option<f64>,
    res: Resolution,
) -> Result<Samples<D>> {
    domain.validate()?;
    if domain.d != D {
        return Err(Error::UnsupportedDomain(format!("domain has d = {}, field has {D}", domain.d)));
    }
    if !domain.diss_is_outer_sphere() {
        return Err(Error::UnsupportedDomain("the dissipative boundary must be the outer sphere".into()));
    }
    let r_in = match domain.shape {
        Shape::Ball => 0.0,
        Shape::Annulus { r_in } => r_in,
        Shape::BallMinusObstacle { obstacle } if obstacle.r_min == obstacle.r_max => obstacle.r_min,
        _ => return Err(Error::UnsupportedDomain("only balls and spherical annuli are sampled".into())),
    };
    let ell = domain.ell;
    let sphere = sphere_rule::<D>(res.n_angle)?;
    let constant = material.is_constant();
    let (mu, lam) = (material.mu_at(&[0.0; D]), material.lambda_at(&[0.0; D]));
    if omega.is_some() && !constant {
        return Err(Error::Inadmissible("manufactured loads need constant coefficients".into()));
    }

    let mut volume = Vec::with_capacity(res.n_r * sphere.len());
    for (r, wr) in gauss_on(res.n_r, r_in, ell) {
        for (s, ws) in &sphere {
            let x = s.map(|v| v * r);
            let w = wr * ws * r.powi(D as i32 - 1);
            let v = field.value(&x);
            let ds = constant.then(|| div_sigma(&field.hessian(&x), mu, lam));
            let f = match (omega, ds) {
                (Some(om), Some(ds)) => {
                    let rho = material.rho_at(&x);
                    Some(std::array::from_fn(|l| (-(v[l] * (om * om * rho)) - ds[l]) / rho))
                }
                _ => None,
            };
            volume.push(VolumePoint { x, w, v, grad: field.grad(&x), div_sigma: ds, f });
        }
    }
    let mut surface = Vec::new();
    let mut spheres = vec![(ell, 1.0, part_of(domain, BoundaryPart::Outer))];
    if r_in > 0.0 {
        spheres.push((r_in, -1.0, part_of(domain, BoundaryPart::Inner)));
    }
    for (r, sign, part) in spheres {
        for (s, ws) in &sphere {
            let x = s.map(|v| v * r);
            surface.push(SurfacePoint {
                x,
                w: ws * r.powi(D as i32 - 1),
                n: s.map(|v| v * sign),
                part,
                v: field.value(&x),
                grad: field.grad(&x),
            });
        }
    }
    Ok(Samples { volume, surface, class: field.class(), ell })
}

fn nodal<const N: usize>(u: &[C], nodes: &[usize], phi: &[f64]) -> [C; N] {
    let mut out = [C::new(0.0, 0.0); N];
    for (a, &n) in nodes.iter().enumerate() {
        for (c, o) in out.iter_mut().enumerate() {
            *o += u[2 * n + c] * phi[a];
        }
    }
    out
}

fn nodal_grad(u: &[C], nodes: &[usize], grad: &[[f64; 2]]) -> Gradient<2> {
    let mut g = [[C::new(0.0, 0.0); 2]; 2];
    for (a, &n) in nodes.iter().enumerate() {
        for j in 0..2 {
            for l in 0..2 {
                g[j][l] += u[2 * n + l] * grad[a][j];
            }
        }
    }
    g
}

/// Sample a finite-element field `u` (and optionally the nodal load `f`) at
/// the assembly quadrature points.
pub fn sample_fem(mesh: &Mesh, u: &[C], f: Option<&[C]>) -> Result<Samples<2>> {
    if u.len() != mesh.n_dofs() || f.is_some_and(|f| f.len() != mesh.n_dofs()) {
        return Err(Error::Mesh("nodal field length does not match the mesh".into()));
    }
    let mut volume = Vec::new();
    for c in 0..mesh.cells.len() {
        let nodes = mesh.cell_nodes(c);
        for p in cell_points(mesh, c)? {
            volume.push(VolumePoint {
                x: p.x,
                w: p.weight,
                v: nodal(u, nodes, &p.phi),
                grad: nodal_grad(u, nodes, &p.grad),
                div_sigma: None,
                f: f.map(|f| nodal(f, nodes, &p.phi)),
            });
        }
    }
    let mut surface = Vec::new();
    for e in &mesh.boundary {
        let nodes = mesh.cell_nodes(e.cell);
        let part = match e.tag {
            EdgeTag::Dirichlet => Part::Dirichlet,
            EdgeTag::Dissipative => Part::Dissipative,
        };
        for q in edge_points(mesh, e.cell, e.local, EDGE_GAUSS)? {
            surface.push(SurfacePoint {
                x: q.point.x,
                w: q.point.weight,
                n: q.normal,
                part,
                v: nodal(u, nodes, &q.point.phi),
                grad: nodal_grad(u, nodes, &q.point.grad),
            });
        }
    }
    Ok(Samples { volume, surface, class: FieldClass::Discrete, ell: mesh.ell })
}
