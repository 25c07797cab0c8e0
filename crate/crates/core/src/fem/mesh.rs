use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeTag {
    Dirichlet,
    Dissipative,
}

/// Boundary edge with its owning cell; `local` is the edge index `e`
/// joining local vertices `e` and `(e+1) % 3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryEdge {
    pub cell: usize,
    pub local: usize,
    pub tag: EdgeTag,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub h_max: f64,
    pub wavelength: f64,
    pub points_per_wavelength: f64,
}

/// Structured polar triangulation of an annulus.
///
/// Order 2 cells are isoparametric: all six nodes sit on the polar map, so
/// boundary edges are quadratic arcs. Local node order is the three vertices
/// followed by the midpoints of edges 01, 12, 20.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    pub cells: Vec<[usize; 6]>,
    pub boundary: Vec<BoundaryEdge>,
    pub order: usize,
    pub r_in: f64,
    pub ell: f64,
    pub n_r: usize,
    pub n_theta: usize,
}

pub fn build_annulus_mesh(r_in: f64, ell: f64, n_r: usize, n_theta: usize, order: usize) -> Result<Mesh> {
    if !(r_in > 0.0 && r_in < ell && ell.is_finite()) {
        return Err(Error::Mesh(format!("need 0 < r_in < ell, got r_in = {r_in}, ell = {ell}")));
    }
    if n_r < 2 || n_theta < 8 {
        return Err(Error::Mesh(format!("need n_r >= 2 and n_theta >= 8, got {n_r}, {n_theta}")));
    }
    if order != 1 && order != 2 {
        return Err(Error::Mesh(format!("order must be 1 or 2, got {order}")));
    }
    let p = order;
    let (rows, cols) = (p * n_r + 1, p * n_theta);
    let mut nodes = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let r = r_in + (ell - r_in) * i as f64 / (p * n_r) as f64;
        for j in 0..cols {
            let t = 2.0 * PI * j as f64 / cols as f64;
            nodes.push([r * t.cos(), r * t.sin()]);
        }
    }
    let id = |i: usize, j: usize| i * cols + j % cols;
    let mut cells = Vec::with_capacity(2 * n_r * n_theta);
    let mut boundary = Vec::with_capacity(2 * n_theta);
    for i in 0..n_r {
        for j in 0..n_theta {
            let (a, b) = (p * i, p * j);
            let lower = [id(a, b), id(a + p, b), id(a + p, b + p)];
            let upper = [id(a, b), id(a + p, b + p), id(a, b + p)];
            let (lower, upper) = if p == 1 {
                ([lower[0], lower[1], lower[2], 0, 0, 0], [upper[0], upper[1], upper[2], 0, 0, 0])
            } else {
                (
                    [lower[0], lower[1], lower[2], id(a + 1, b), id(a + 2, b + 1), id(a + 1, b + 1)],
                    [upper[0], upper[1], upper[2], id(a + 1, b + 1), id(a + 1, b + 2), id(a, b + 1)],
                )
            };
            if i == n_r - 1 {
                boundary.push(BoundaryEdge { cell: cells.len(), local: 1, tag: EdgeTag::Dissipative });
            }
            cells.push(lower);
            if i == 0 {
                boundary.push(BoundaryEdge { cell: cells.len(), local: 2, tag: EdgeTag::Dirichlet });
            }
            cells.push(upper);
        }
    }
    Ok(Mesh { nodes, cells, boundary, order, r_in, ell, n_r, n_theta })
}

impl Mesh {
    pub fn nodes_per_cell(&self) -> usize {
        if self.order == 1 {
            3
        } else {
            6
        }
    }

    pub fn cell_nodes(&self, c: usize) -> &[usize] {
        &self.cells[c][..self.nodes_per_cell()]
    }

    pub fn n_vertices(&self) -> usize {
        (self.n_r + 1) * self.n_theta
    }

    pub fn n_dofs(&self) -> usize {
        2 * self.nodes.len()
    }

    /// Local node indices on boundary edge `e`, endpoints first.
    pub fn edge_local_nodes(&self, e: usize) -> Vec<usize> {
        let mut v = vec![e, (e + 1) % 3];
        if self.order == 2 {
            v.push(3 + e);
        }
        v
    }

    pub fn edge_nodes(&self, edge: &BoundaryEdge) -> Vec<usize> {
        self.edge_local_nodes(edge.local).into_iter().map(|k| self.cells[edge.cell][k]).collect()
    }

    /// Nodes lying on boundary edges with the given tag, sorted.
    pub fn tagged_nodes(&self, tag: EdgeTag) -> Vec<usize> {
        let mut v: Vec<usize> =
            self.boundary.iter().filter(|e| e.tag == tag).flat_map(|e| self.edge_nodes(e)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Longest straight vertex-to-vertex edge.
    pub fn h_max(&self) -> f64 {
        self.cells
            .iter()
            .flat_map(|c| (0..3).map(move |e| (c[e], c[(e + 1) % 3])))
            .map(|(a, b)| {
                let (p, q) = (self.nodes[a], self.nodes[b]);
                (p[0] - q[0]).hypot(p[1] - q[1])
            })
            .fold(0.0, f64::max)
    }

    /// Nodal points per shear wavelength `2π ϑ_S,min / ω`.
    pub fn resolution(&self, omega: f64, theta_s_min: f64) -> ResolutionReport {
        let h_max = self.h_max();
        let wavelength = 2.0 * PI * theta_s_min / omega;
        ResolutionReport { h_max, wavelength, points_per_wavelength: self.order as f64 * wavelength / h_max }
    }
}

/// Smallest structured mesh meeting `ppw` nodal points per shear wavelength,
/// with at least `n_theta_min` angular cells.
pub fn mesh_for_resolution(
    r_in: f64,
    ell: f64,
    order: usize,
    omega: f64,
    theta_s_min: f64,
    ppw: f64,
    n_theta_min: usize,
) -> Result<Mesh> {
    if !(omega > 0.0 && theta_s_min > 0.0 && ppw > 0.0) {
        return Err(Error::Mesh(format!("need positive omega, wavespeed and ppw, got {omega}, {theta_s_min}, {ppw}")));
    }
    let wavelength = 2.0 * PI * theta_s_min / omega;
    let h = order as f64 * wavelength / ppw / 2f64.sqrt();
    let mut n_theta = ((2.0 * PI * ell / h).ceil() as usize).max(n_theta_min).max(8);
    n_theta = n_theta.div_ceil(8) * 8;
    let mut n_r = (((ell - r_in) / h).ceil() as usize).max(2);
    loop {
        let mesh = build_annulus_mesh(r_in, ell, n_r, n_theta, order)?;
        if mesh.resolution(omega, theta_s_min).points_per_wavelength >= ppw {
            return Ok(mesh);
        }
        n_r += 1;
        n_theta += 8;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn area(m: &Mesh) -> f64 {
        m.cells
            .iter()
            .map(|c| {
                let (a, b, d) = (m.nodes[c[0]], m.nodes[c[1]], m.nodes[c[2]]);
                0.5 * ((b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]))
            })
            .sum()
    }

    #[test]
    fn counts_for_small_linear_mesh() {
        let m = build_annulus_mesh(0.5, 1.0, 2, 8, 1).unwrap();
        assert_eq!(m.cells.len(), 32);
        assert_eq!(m.nodes.len(), 24);
        assert_eq!(m.n_vertices(), 24);
        let q = build_annulus_mesh(0.5, 1.0, 2, 8, 2).unwrap();
        assert_eq!(q.cells.len(), 32);
        assert_eq!(q.nodes.len(), 5 * 16);
    }

    #[test]
    fn cells_positively_oriented() {
        let m = build_annulus_mesh(0.3, 2.0, 3, 12, 2).unwrap();
        let straight: Vec<[usize; 6]> = m.cells.clone();
        for c in straight {
            let (a, b, d) = (m.nodes[c[0]], m.nodes[c[1]], m.nodes[c[2]]);
            assert!((b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]) > 0.0);
        }
    }

    #[test]
    fn polygon_area_converges() {
        let m = build_annulus_mesh(0.5, 1.0, 16, 256, 1).unwrap();
        let exact = PI * (1.0 - 0.25);
        assert!((area(&m) - exact).abs() / exact <= 1e-3);
    }

    #[test]
    fn boundary_tags() {
        for order in [1, 2] {
            let m = build_annulus_mesh(0.5, 1.0, 3, 16, order).unwrap();
            assert_eq!(m.boundary.len(), 32);
            for e in &m.boundary {
                let expect = if e.tag == EdgeTag::Dirichlet { 0.5 } else { 1.0 };
                for n in m.edge_nodes(e) {
                    let p = m.nodes[n];
                    assert!((p[0].hypot(p[1]) - expect).abs() < 1e-14);
                }
            }
            assert_eq!(m.tagged_nodes(EdgeTag::Dirichlet).len(), 16 * order);
            assert_eq!(m.tagged_nodes(EdgeTag::Dissipative).len(), 16 * order);
        }
    }

    #[test]
    fn degenerate_parameters_rejected() {
        assert!(build_annulus_mesh(1.0, 1.0, 2, 8, 1).is_err());
        assert!(build_annulus_mesh(0.5, 1.0, 1, 8, 1).is_err());
        assert!(build_annulus_mesh(0.5, 1.0, 2, 7, 1).is_err());
        assert!(build_annulus_mesh(0.5, 1.0, 2, 8, 3).is_err());
    }

    #[test]
    fn resolution_policy_met() {
        let m = mesh_for_resolution(0.5, 1.0, 2, 8.0, 1.0, 10.0, 16).unwrap();
        assert!(m.resolution(8.0, 1.0).points_per_wavelength >= 10.0);
    }
}
