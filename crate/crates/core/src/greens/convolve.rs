use num_complex::Complex64 as C;
use rayon::prelude::*;

use super::field::{Lattice, SourceField};
use super::kernel::{ball_integrals, green_coefficients, Medium};
use crate::{Error, Result};

/// Treatment of a target that coincides with a quadrature node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularRule {
    /// Replace the node's cell by the exact kernel integral over a ball of
    /// equal volume centred at the target.
    EqualVolumeBall,
    None,
}

/// Convolution split into the full field and its `G^A` part.
#[derive(Clone, Debug, PartialEq)]
pub struct Convolution {
    pub total: Vec<[C; 3]>,
    pub scalar: Vec<[C; 3]>,
}

fn coincident(d2: f64, w: f64) -> bool {
    d2 <= (1e-9 * w.cbrt()).powi(2)
}

/// `u(x) = Σ_j w_j G(x − y_j) f(y_j)` at each target.
pub fn convolve(
    f: &SourceField,
    medium: &Medium,
    omega: f64,
    targets: &[[f64; 3]],
    rule: SingularRule,
) -> Result<Convolution> {
    let pre = 1.0 / (4.0 * std::f64::consts::PI * medium.theta_s().powi(2));
    let k_s = omega / medium.theta_s();
    let rows: Vec<Result<([C; 3], [C; 3])>> = targets
        .par_iter()
        .map(|x| {
            let mut u = [C::new(0.0, 0.0); 3];
            let mut ua = [C::new(0.0, 0.0); 3];
            for ((y, w), v) in f.nodes.iter().zip(&f.weights).zip(&f.values) {
                let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
                let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                if coincident(d2, *w) {
                    if rule == SingularRule::None {
                        return Err(Error::Singularity(d2.sqrt()));
                    }
                    let a = (3.0 * w / (4.0 * std::f64::consts::PI)).cbrt();
                    let (full, scalar) = ball_integrals(a, medium, omega)?;
                    for i in 0..3 {
                        u[i] += full * v[i];
                        ua[i] += scalar * v[i];
                    }
                    continue;
                }
                let r = d2.sqrt();
                let (ca, cb) = green_coefficients(r, medium, omega)?;
                let ga = C::from_polar(pre / r, k_s * r);
                let dv: C = (0..3).map(|i| v[i] * (d[i] / r)).sum();
                for i in 0..3 {
                    u[i] += (ca * v[i] + cb * dv * (d[i] / r)) * *w;
                    ua[i] += ga * v[i] * *w;
                }
            }
            Ok((u, ua))
        })
        .collect();
    let mut out = Convolution { total: Vec::with_capacity(targets.len()), scalar: Vec::with_capacity(targets.len()) };
    for r in rows {
        let (u, ua) = r?;
        out.total.push(u);
        out.scalar.push(ua);
    }
    Ok(out)
}

/// Kernel samples `w·G(d·h)` and `w·G^A(d·h)` for all lattice offsets `d`.
struct OffsetTable {
    side: usize,
    n: isize,
    /// `[xx, yy, zz, xy, xz, yz, scalar]` as (re, im) pairs.
    data: Vec<[f64; 14]>,
}

impl OffsetTable {
    fn new(lattice: &Lattice, weight: f64, medium: &Medium, omega: f64) -> Result<Self> {
        let n = lattice.n as isize;
        let side = 2 * lattice.n + 1;
        let h = lattice.h();
        let pre = 1.0 / (4.0 * std::f64::consts::PI * medium.theta_s().powi(2));
        let k_s = omega / medium.theta_s();
        let a = (3.0 * weight / (4.0 * std::f64::consts::PI)).cbrt();
        let (self_full, self_scalar) = ball_integrals(a, medium, omega)?;
        let data: Vec<Result<[f64; 14]>> = (0..side * side * side)
            .into_par_iter()
            .map(|flat| {
                let dx = (flat / (side * side)) as isize - n;
                let dy = ((flat / side) % side) as isize - n;
                let dz = (flat % side) as isize - n;
                if dx == 0 && dy == 0 && dz == 0 {
                    let z = C::new(0.0, 0.0);
                    return Ok(pack([self_full, self_full, self_full, z, z, z, self_scalar]));
                }
                let d = [dx as f64 * h, dy as f64 * h, dz as f64 * h];
                let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                let (ca, cb) = green_coefficients(r, medium, omega)?;
                let u = d.map(|v| v / r);
                let g = |i: usize, j: usize| {
                    let mut v = cb * (u[i] * u[j]);
                    if i == j {
                        v += ca;
                    }
                    v * weight
                };
                let ga = C::from_polar(pre / r * weight, k_s * r);
                Ok(pack([g(0, 0), g(1, 1), g(2, 2), g(0, 1), g(0, 2), g(1, 2), ga]))
            })
            .collect();
        Ok(Self { side, n, data: data.into_iter().collect::<Result<_>>()? })
    }

    fn get(&self, t: [usize; 3], s: [usize; 3]) -> &[f64; 14] {
        let o = |a: usize, b: usize| (a as isize - b as isize + self.n) as usize;
        &self.data[(o(t[0], s[0]) * self.side + o(t[1], s[1])) * self.side + o(t[2], s[2])]
    }
}

fn pack(v: [C; 7]) -> [f64; 14] {
    let mut out = [0.0; 14];
    for (k, c) in v.iter().enumerate() {
        out[2 * k] = c.re;
        out[2 * k + 1] = c.im;
    }
    out
}

/// Convolves several fields sampled on the same lattice nodes with equal
/// weights; the result equals [`convolve`] with [`SingularRule::EqualVolumeBall`].
pub fn convolve_lattice(
    lattice: &Lattice,
    sources: &[[usize; 3]],
    weight: f64,
    fields: &[Vec<[C; 3]>],
    targets: &[[usize; 3]],
    medium: &Medium,
    omega: f64,
) -> Result<Vec<Convolution>> {
    let q = fields.len();
    if fields.iter().any(|f| f.len() != sources.len()) {
        return Err(Error::Domain("field length differs from source count".into()));
    }
    let table = OffsetTable::new(lattice, weight, medium, omega)?;
    // source-major layout: [(s * 3 + c) * q + field]
    let mut fr = vec![0.0; sources.len() * 3 * q];
    let mut fi = vec![0.0; sources.len() * 3 * q];
    for (k, f) in fields.iter().enumerate() {
        for (s, v) in f.iter().enumerate() {
            for c in 0..3 {
                fr[(s * 3 + c) * q + k] = v[c].re;
                fi[(s * 3 + c) * q + k] = v[c].im;
            }
        }
    }
    // block index of G entry (i, j) in the packed table
    const IDX: [[usize; 3]; 3] = [[0, 3, 4], [3, 1, 5], [4, 5, 2]];
    let per_target: Vec<Vec<f64>> = targets
        .par_iter()
        .map(|t| {
            // [total(3) | scalar(3)] × q, re then im
            let mut acc = vec![0.0; 12 * q];
            let (acc_r, acc_i) = acc.split_at_mut(6 * q);
            for (s, src) in sources.iter().enumerate() {
                let e = table.get(*t, *src);
                let base = s * 3 * q;
                for i in 0..3 {
                    let (ar, ai) = (&mut acc_r[i * q..(i + 1) * q], &mut acc_i[i * q..(i + 1) * q]);
                    for j in 0..3 {
                        let b = IDX[i][j];
                        let (gr, gi) = (e[2 * b], e[2 * b + 1]);
                        let (xr, xi) = (&fr[base + j * q..base + (j + 1) * q], &fi[base + j * q..base + (j + 1) * q]);
                        for k in 0..q {
                            ar[k] += gr * xr[k] - gi * xi[k];
                            ai[k] += gr * xi[k] + gi * xr[k];
                        }
                    }
                }
                let (gr, gi) = (e[12], e[13]);
                for j in 0..3 {
                    let o = (3 + j) * q;
                    let (xr, xi) = (&fr[base + j * q..base + (j + 1) * q], &fi[base + j * q..base + (j + 1) * q]);
                    let (ar, ai) = (&mut acc_r[o..o + q], &mut acc_i[o..o + q]);
                    for k in 0..q {
                        ar[k] += gr * xr[k] - gi * xi[k];
                        ai[k] += gr * xi[k] + gi * xr[k];
                    }
                }
            }
            acc
        })
        .collect();
    let mut out: Vec<Convolution> = (0..q)
        .map(|_| Convolution { total: Vec::with_capacity(targets.len()), scalar: Vec::with_capacity(targets.len()) })
        .collect();
    for acc in &per_target {
        for (k, conv) in out.iter_mut().enumerate() {
            let at = |slot: usize, c: usize| C::new(acc[(slot + c) * q + k], acc[6 * q + (slot + c) * q + k]);
            conv.total.push(std::array::from_fn(|c| at(0, c)));
            conv.scalar.push(std::array::from_fn(|c| at(3, c)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::field::rotate_c;

    fn medium() -> Medium {
        Medium::new(1.2, 0.9, 2.0).unwrap()
    }

    fn field(l: &Lattice) -> SourceField {
        SourceField::on_ball(l, 1.0, |x| {
            [C::new(x[0] + 0.3, x[1]), C::new(1.0 - x[2], 0.2), C::new(x[0] * x[1], -x[2])]
        })
        .unwrap()
    }

    #[test]
    fn zero_source_gives_zero() {
        let l = Lattice::new(6, 1.0).unwrap();
        let f = SourceField::on_ball(&l, 1.0, |_| [C::new(0.0, 0.0); 3]).unwrap();
        let u = convolve(&f, &medium(), 2.0, &f.nodes, SingularRule::EqualVolumeBall).unwrap();
        assert!(u.total.iter().flatten().all(|v| *v == C::new(0.0, 0.0)));
    }

    #[test]
    fn coincident_target_needs_rule() {
        let l = Lattice::new(4, 1.0).unwrap();
        let f = field(&l);
        assert!(matches!(convolve(&f, &medium(), 1.0, &f.nodes[..1], SingularRule::None), Err(Error::Singularity(_))));
    }

    #[test]
    fn linearity() {
        let l = Lattice::new(6, 1.0).unwrap();
        let f1 = field(&l);
        let mut f2 = f1.clone();
        for v in f2.values.iter_mut() {
            v.swap(0, 2);
            v[1] *= C::new(0.0, 2.0);
        }
        let alpha = C::new(0.7, -1.3);
        let mut comb = f1.clone();
        for (c, (a, b)) in comb.values.iter_mut().zip(f1.values.iter().zip(&f2.values)) {
            *c = std::array::from_fn(|i| alpha * a[i] + b[i]);
        }
        let m = medium();
        let t = &f1.nodes;
        let u1 = convolve(&f1, &m, 1.5, t, SingularRule::EqualVolumeBall).unwrap().total;
        let u2 = convolve(&f2, &m, 1.5, t, SingularRule::EqualVolumeBall).unwrap().total;
        let uc = convolve(&comb, &m, 1.5, t, SingularRule::EqualVolumeBall).unwrap().total;
        let scale = uc.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        for ((a, b), c) in u1.iter().zip(&u2).zip(&uc) {
            for i in 0..3 {
                assert!((alpha * a[i] + b[i] - c[i]).norm() <= 1e-13 * scale);
            }
        }
    }

    #[test]
    fn lattice_path_matches_direct() {
        let l = Lattice::new(8, 1.0).unwrap();
        let f = field(&l);
        let idx = f.lattice.as_ref().unwrap().1.clone();
        let m = medium();
        let direct = convolve(&f, &m, 2.5, &f.nodes, SingularRule::EqualVolumeBall).unwrap();
        let batch = convolve_lattice(&l, &idx, f.weights[0], &[f.values.clone()], &idx, &m, 2.5).unwrap();
        let scale = direct.total.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in direct.total.iter().zip(&batch[0].total).chain(direct.scalar.iter().zip(&batch[0].scalar)) {
            for i in 0..3 {
                assert!((a[i] - b[i]).norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn rotation_commutes() {
        let l = Lattice::new(6, 1.0).unwrap();
        let f = field(&l);
        let (c, s) = (0.6f64, 0.8f64);
        let (c2, s2) = (0.28f64, 0.96f64);
        let rz = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
        let rx = [[1.0, 0.0, 0.0], [0.0, c2, -s2], [0.0, s2, c2]];
        let r: [[f64; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| rz[i][k] * rx[k][j]).sum()));
        let targets = [[0.11, -0.32, 0.4], [0.7, 0.1, -0.2], [0.05, 0.05, 0.05]];
        let m = medium();
        let u = convolve(&f, &m, 1.7, &targets, SingularRule::EqualVolumeBall).unwrap().total;
        let rt: Vec<[f64; 3]> = targets.iter().map(|x| super::super::field::rotate(&r, x)).collect();
        let ur = convolve(&f.rotated(&r), &m, 1.7, &rt, SingularRule::EqualVolumeBall).unwrap().total;
        for (a, b) in u.iter().zip(&ur) {
            let ra = rotate_c(&r, a);
            let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for i in 0..3 {
                assert!((ra[i] - b[i]).norm() <= 1e-12 * scale);
            }
        }
    }
}
