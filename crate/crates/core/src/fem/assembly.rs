use num_complex::Complex64 as C;
use rayon::prelude::*;

use super::element::{cell_points, edge_points};
use super::mesh::{EdgeTag, Mesh};
use super::sparse::Csr;
use crate::model::{MaterialField, RobinSpec};
use crate::Result;

/// Gauss points per boundary edge.
pub const EDGE_GAUSS: usize = 5;

/// Stiffness, mass and impedance matrices with Dirichlet dofs eliminated.
///
/// Dof numbering interleaves components: dof `2·node + c`. The full
/// matrices are kept for checks on unconstrained fields; the `_ff` blocks
/// act on free dofs only.
#[derive(Clone, Debug)]
pub struct AssembledSystem {
    pub omega: f64,
    pub stiffness: Csr,
    pub mass: Csr,
    pub robin: Csr,
    pub free: Vec<usize>,
    pub free_map: Vec<Option<usize>>,
    pub k_ff: Csr,
    pub m_ff: Csr,
    pub r_ff: Csr,
}

type Triplets = Vec<(usize, usize, f64)>;

fn cell_matrices(mesh: &Mesh, material: &MaterialField, c: usize) -> Result<(Triplets, Triplets)> {
    let nodes = mesh.cell_nodes(c);
    let nl = nodes.len();
    let mut k = vec![0.0; 4 * nl * nl];
    let mut m = vec![0.0; nl * nl];
    for p in cell_points(mesh, c)? {
        let (rho, mu, lam) = (material.rho_at(&p.x), material.mu_at(&p.x), material.lambda_at(&p.x));
        for a in 0..nl {
            for b in 0..nl {
                m[a * nl + b] += p.weight * rho * p.phi[a] * p.phi[b];
                let (ga, gb) = (p.grad[a], p.grad[b]);
                let dot = ga[0] * gb[0] + ga[1] * gb[1];
                for cc in 0..2 {
                    for d in 0..2 {
                        let delta = if cc == d { dot } else { 0.0 };
                        let v = mu * (delta + ga[d] * gb[cc]) + lam * ga[cc] * gb[d];
                        k[((2 * a + cc) * nl + b) * 2 + d] += p.weight * v;
                    }
                }
            }
        }
    }
    let mut kt = Vec::with_capacity(4 * nl * nl);
    let mut mt = Vec::with_capacity(2 * nl * nl);
    for a in 0..nl {
        for b in 0..nl {
            for cc in 0..2 {
                mt.push((2 * nodes[a] + cc, 2 * nodes[b] + cc, m[a * nl + b]));
                for d in 0..2 {
                    kt.push((2 * nodes[a] + cc, 2 * nodes[b] + d, k[((2 * a + cc) * nl + b) * 2 + d]));
                }
            }
        }
    }
    Ok((kt, mt))
}

fn robin_matrix(mesh: &Mesh, robin: &RobinSpec) -> Result<Triplets> {
    let mut t = Vec::new();
    for e in mesh.boundary.iter().filter(|e| e.tag == EdgeTag::Dissipative) {
        let nodes = mesh.cell_nodes(e.cell);
        let local = mesh.edge_local_nodes(e.local);
        for q in edge_points(mesh, e.cell, e.local, EDGE_GAUSS)? {
            let n = q.normal;
            for &a in &local {
                for &b in &local {
                    let s = q.point.weight * q.point.phi[a] * q.point.phi[b];
                    for c in 0..2 {
                        for d in 0..2 {
                            let delta = if c == d { 1.0 } else { 0.0 };
                            let v = robin.a_t * (delta - n[c] * n[d]) + robin.a_n * n[c] * n[d];
                            t.push((2 * nodes[a] + c, 2 * nodes[b] + d, s * v));
                        }
                    }
                }
            }
        }
    }
    Ok(t)
}

pub fn assemble(mesh: &Mesh, material: &MaterialField, robin: &RobinSpec, omega: f64) -> Result<AssembledSystem> {
    let n = mesh.n_dofs();
    let per_cell: Vec<(Triplets, Triplets)> =
        (0..mesh.cells.len()).into_par_iter().map(|c| cell_matrices(mesh, material, c)).collect::<Result<_>>()?;
    let (mut kt, mut mt) = (Vec::new(), Vec::new());
    for (k, m) in per_cell {
        kt.extend(k);
        mt.extend(m);
    }
    let stiffness = Csr::from_triplets(n, kt);
    let mass = Csr::from_triplets(n, mt);
    let robin = Csr::from_triplets(n, robin_matrix(mesh, robin)?);

    let mut fixed = vec![false; n];
    for node in mesh.tagged_nodes(EdgeTag::Dirichlet) {
        fixed[2 * node] = true;
        fixed[2 * node + 1] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&i| !fixed[i]).collect();
    let mut free_map = vec![None; n];
    for (k, &i) in free.iter().enumerate() {
        free_map[i] = Some(k);
    }
    Ok(AssembledSystem {
        omega,
        k_ff: stiffness.restrict(&free, &free_map),
        m_ff: mass.restrict(&free, &free_map),
        r_ff: robin.restrict(&free, &free_map),
        stiffness,
        mass,
        robin,
        free,
        free_map,
    })
}

impl AssembledSystem {
    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    /// `S x` on free dofs, `S = K − ω²M − iωR`.
    pub fn apply(&self, x: &[C]) -> Vec<C> {
        let (k, m, r) = (self.k_ff.mul(x), self.m_ff.mul(x), self.r_ff.mul(x));
        let w = self.omega;
        (0..x.len()).map(|i| k[i] - m[i] * (w * w) - C::new(0.0, w) * r[i]).collect()
    }

    /// Triplets of `S` on free dofs.
    pub fn system_triplets(&self) -> Vec<(usize, usize, C)> {
        let w = self.omega;
        let mut t: Vec<(usize, usize, C)> = self.k_ff.triplets().map(|(i, j, v)| (i, j, C::new(v, 0.0))).collect();
        t.extend(self.m_ff.triplets().map(|(i, j, v)| (i, j, C::new(-w * w * v, 0.0))));
        t.extend(self.r_ff.triplets().map(|(i, j, v)| (i, j, C::new(0.0, -w * v))));
        t
    }

    /// Free rows of the load `M f` for a full nodal field `f`.
    pub fn load(&self, f: &[C]) -> Vec<C> {
        let b = self.mass.mul(f);
        self.restrict(&b)
    }

    pub fn restrict(&self, full: &[C]) -> Vec<C> {
        self.free.iter().map(|&i| full[i]).collect()
    }

    /// Full nodal field with zeros on Dirichlet dofs.
    pub fn extend(&self, free: &[C]) -> Vec<C> {
        let mut u = vec![C::new(0.0, 0.0); self.free_map.len()];
        for (k, &i) in self.free.iter().enumerate() {
            u[i] = free[k];
        }
        u
    }
}

/// Free rows of `∫_Γdiss g·φ_i` for boundary data `g(x, n)`.
pub fn boundary_load<G>(mesh: &Mesh, system: &AssembledSystem, g: G) -> Result<Vec<C>>
where
    G: Fn([f64; 2], [f64; 2]) -> [C; 2],
{
    let mut b = vec![C::new(0.0, 0.0); mesh.n_dofs()];
    for e in mesh.boundary.iter().filter(|e| e.tag == EdgeTag::Dissipative) {
        let nodes = mesh.cell_nodes(e.cell);
        for q in edge_points(mesh, e.cell, e.local, EDGE_GAUSS)? {
            let v = g(q.point.x, q.normal);
            for &a in &mesh.edge_local_nodes(e.local) {
                for c in 0..2 {
                    b[2 * nodes[a] + c] += v[c] * (q.point.weight * q.point.phi[a]);
                }
            }
        }
    }
    Ok(system.restrict(&b))
}

/// Free rows of `∫ ρ f·φ_i` for a load given pointwise.
pub fn volume_load<F>(mesh: &Mesh, material: &MaterialField, system: &AssembledSystem, f: F) -> Result<Vec<C>>
where
    F: Fn([f64; 2]) -> [C; 2],
{
    let mut b = vec![C::new(0.0, 0.0); mesh.n_dofs()];
    for c in 0..mesh.cells.len() {
        let nodes = mesh.cell_nodes(c);
        for p in cell_points(mesh, c)? {
            let v = f(p.x);
            let s = p.weight * material.rho_at(&p.x);
            for (a, &node) in nodes.iter().enumerate() {
                for k in 0..2 {
                    b[2 * node + k] += v[k] * (s * p.phi[a]);
                }
            }
        }
    }
    Ok(system.restrict(&b))
}

/// Nodal interpolant of a vector field.
pub fn interpolate<F: Fn([f64; 2]) -> [C; 2]>(mesh: &Mesh, f: F) -> Vec<C> {
    mesh.nodes.iter().flat_map(|&x| f(x)).collect()
}
