use super::mesh::Mesh;
use crate::{Error, Result};

/// Degree-5 seven-point rule on the reference triangle `(0,0),(1,0),(0,1)`;
/// weights sum to 1/2.
pub fn triangle_rule() -> [([f64; 2], f64); 7] {
    let (a1, b1) = (0.059_715_871_789_769_82, 0.470_142_064_105_115_1);
    let (a2, b2) = (0.797_426_985_353_087_3, 0.101_286_507_323_456_3);
    let (w1, w2) = (0.132_394_152_788_506_18, 0.125_939_180_544_827_15);
    let (w0, w1, w2) = (0.225 / 2.0, w1 / 2.0, w2 / 2.0);
    [
        ([1.0 / 3.0, 1.0 / 3.0], w0),
        ([b1, b1], w1),
        ([a1, b1], w1),
        ([b1, a1], w1),
        ([b2, b2], w2),
        ([a2, b2], w2),
        ([b2, a2], w2),
    ]
}

/// Shape values and reference gradients at `(ξ, η)`.
pub fn shape(order: usize, xi: [f64; 2]) -> (Vec<f64>, Vec<[f64; 2]>) {
    let (x, y) = (xi[0], xi[1]);
    let l = [1.0 - x - y, x, y];
    let dl = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
    if order == 1 {
        return (l.to_vec(), dl.to_vec());
    }
    let mut n = Vec::with_capacity(6);
    let mut g = Vec::with_capacity(6);
    for i in 0..3 {
        n.push(l[i] * (2.0 * l[i] - 1.0));
        let s = 4.0 * l[i] - 1.0;
        g.push([s * dl[i][0], s * dl[i][1]]);
    }
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        n.push(4.0 * l[i] * l[j]);
        g.push([4.0 * (dl[i][0] * l[j] + l[i] * dl[j][0]), 4.0 * (dl[i][1] * l[j] + l[i] * dl[j][1])]);
    }
    (n, g)
}

/// Reference coordinates of parameter `t ∈ [0,1]` along local edge `e`.
pub fn edge_point(e: usize, t: f64) -> [f64; 2] {
    match e {
        0 => [t, 0.0],
        1 => [1.0 - t, t],
        _ => [0.0, 1.0 - t],
    }
}

/// Physical data of one quadrature point inside a cell.
#[derive(Clone, Debug)]
pub struct Point {
    pub x: [f64; 2],
    pub weight: f64,
    pub phi: Vec<f64>,
    pub grad: Vec<[f64; 2]>,
}

/// Map a reference point of cell `c`; `weight` is the Jacobian determinant.
pub fn map_point(mesh: &Mesh, c: usize, xi: [f64; 2]) -> Result<Point> {
    let (phi, dref) = shape(mesh.order, xi);
    let nodes = mesh.cell_nodes(c);
    let mut x = [0.0; 2];
    let mut j = [[0.0; 2]; 2];
    for (k, &n) in nodes.iter().enumerate() {
        let p = mesh.nodes[n];
        for a in 0..2 {
            x[a] += phi[k] * p[a];
            for b in 0..2 {
                j[a][b] += p[a] * dref[k][b];
            }
        }
    }
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if !(det > 0.0) {
        return Err(Error::Mesh(format!("non-positive Jacobian {det:e} in cell {c}")));
    }
    let inv = [[j[1][1] / det, -j[0][1] / det], [-j[1][0] / det, j[0][0] / det]];
    let grad =
        dref.iter().map(|g| [inv[0][0] * g[0] + inv[1][0] * g[1], inv[0][1] * g[0] + inv[1][1] * g[1]]).collect();
    Ok(Point { x, weight: det, phi, grad })
}

/// Quadrature points of cell `c`.
pub fn cell_points(mesh: &Mesh, c: usize) -> Result<Vec<Point>> {
    triangle_rule()
        .iter()
        .map(|&(xi, w)| {
            let mut p = map_point(mesh, c, xi)?;
            p.weight *= w;
            Ok(p)
        })
        .collect()
}

/// Boundary quadrature point: cell data evaluated on the edge, with the
/// outward unit normal of the mapped edge and the arc-length weight.
#[derive(Clone, Debug)]
pub struct EdgePoint {
    pub point: Point,
    pub normal: [f64; 2],
}

pub fn edge_points(mesh: &Mesh, c: usize, e: usize, n_gauss: usize) -> Result<Vec<EdgePoint>> {
    let dxi = match e {
        0 => [1.0, 0.0],
        1 => [-1.0, 1.0],
        _ => [0.0, -1.0],
    };
    crate::quad::gauss_on(n_gauss, 0.0, 1.0)
        .into_iter()
        .map(|(t, w)| {
            let xi = edge_point(e, t);
            let mut p = map_point(mesh, c, xi)?;
            let (_, dref) = shape(mesh.order, xi);
            let mut tan = [0.0; 2];
            for (k, &n) in mesh.cell_nodes(c).iter().enumerate() {
                let s = dref[k][0] * dxi[0] + dref[k][1] * dxi[1];
                tan[0] += mesh.nodes[n][0] * s;
                tan[1] += mesh.nodes[n][1] * s;
            }
            let len = tan[0].hypot(tan[1]);
            p.weight = w * len;
            Ok(EdgePoint { point: p, normal: [tan[1] / len, -tan[0] / len] })
        })
        .collect()
}
