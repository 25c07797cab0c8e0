use num_complex::Complex64 as C;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Vertex lattice `x = −ell + i·h`, `i = 0..=n`, `h = 2 ell / n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub n: usize,
    pub ell: f64,
}

impl Lattice {
    pub fn new(n: usize, ell: f64) -> Result<Self> {
        if n < 2 || !(ell > 0.0) {
            return Err(Error::Domain(format!("lattice n = {n}, ell = {ell}")));
        }
        Ok(Self { n, ell })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.ell / self.n as f64
    }

    pub fn point(&self, idx: [usize; 3]) -> [f64; 3] {
        let h = self.h();
        idx.map(|i| -self.ell + i as f64 * h)
    }

    /// Indices of nodes with `|x| < radius`, in lexicographic order.
    pub fn ball_indices(&self, radius: f64) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for i in 0..=self.n {
            for j in 0..=self.n {
                for k in 0..=self.n {
                    let x = self.point([i, j, k]);
                    if x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < radius * radius {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }
}

pub fn ball_volume(radius: f64) -> f64 {
    4.0 / 3.0 * std::f64::consts::PI * radius.powi(3)
}

/// Quadrature samples of a complex vector field on its support.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceField {
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub values: Vec<[C; 3]>,
    /// Lattice indices when the nodes come from a [`Lattice`].
    pub lattice: Option<(Lattice, Vec<[usize; 3]>)>,
}

impl SourceField {
    pub fn new(nodes: Vec<[f64; 3]>, weights: Vec<f64>, values: Vec<[C; 3]>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.len() != values.len() {
            return Err(Error::Domain("nodes, weights and values differ in length".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Domain("quadrature weights must be positive".into()));
        }
        Ok(Self { nodes, weights, values, lattice: None })
    }

    /// Lattice nodes in `B_radius` with equal weights summing to `|B_radius|`.
    pub fn on_ball<F: Fn(&[f64; 3]) -> [C; 3]>(lattice: &Lattice, radius: f64, f: F) -> Result<Self> {
        let idx = lattice.ball_indices(radius);
        if idx.is_empty() {
            return Err(Error::Domain("no lattice node inside the support".into()));
        }
        let nodes: Vec<[f64; 3]> = idx.iter().map(|i| lattice.point(*i)).collect();
        let w = ball_volume(radius) / nodes.len() as f64;
        let values = nodes.iter().map(&f).collect();
        let mut s = Self::new(nodes, vec![w; idx.len()], values)?;
        s.lattice = Some((*lattice, idx));
        Ok(s)
    }

    /// `‖f‖² = Σ w |f|²`.
    pub fn norm(&self) -> f64 {
        weighted_norm(&self.weights, &self.values)
    }

    /// Norm of one Cartesian component.
    pub fn component_norm(&self, c: usize) -> f64 {
        self.weights.iter().zip(&self.values).map(|(w, v)| w * v[c].norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies `R` to nodes and values; weights are unchanged.
    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> Self {
        Self {
            nodes: self.nodes.iter().map(|x| rotate(r, x)).collect(),
            weights: self.weights.clone(),
            values: self.values.iter().map(|v| rotate_c(r, v)).collect(),
            lattice: None,
        }
    }
}

pub fn weighted_norm(weights: &[f64], values: &[[C; 3]]) -> f64 {
    weights.iter().zip(values).map(|(w, v)| w * v.iter().map(|c| c.norm_sqr()).sum::<f64>()).sum::<f64>().sqrt()
}

pub fn rotate(r: &[[f64; 3]; 3], x: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| (0..3).map(|j| r[i][j] * x[j]).sum())
}

pub fn rotate_c(r: &[[f64; 3]; 3], x: &[C; 3]) -> [C; 3] {
    std::array::from_fn(|i| (0..3).map(|j| x[j] * r[i][j]).sum())
}

/// Smooth source: modulated Gaussian bumps times `(1 − |x|²/ell²)²` on `B_ell`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothSource {
    pub ell: f64,
    pub bumps: Vec<Bump>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: [f64; 3],
    pub width: f64,
    pub amplitude: [C; 3],
    pub wave: [f64; 3],
}

impl SmoothSource {
    /// Random bumps; modulation wave numbers up to `k_max`.
    pub fn random<R: Rng>(rng: &mut R, ell: f64, k_max: f64) -> Self {
        let count = rng.gen_range(1..=3);
        let bumps = (0..count)
            .map(|_| {
                let center = loop {
                    let c: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.6..0.6) * ell);
                    if c.iter().map(|v| v * v).sum::<f64>() < 0.36 * ell * ell {
                        break c;
                    }
                };
                Bump {
                    center,
                    width: rng.gen_range(0.15..0.5) * ell,
                    amplitude: std::array::from_fn(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
                    wave: std::array::from_fn(|_| rng.gen_range(-1.0..1.0) * k_max / 3f64.sqrt()),
                }
            })
            .collect();
        Self { ell, bumps }
    }

    pub fn eval(&self, x: &[f64; 3]) -> [C; 3] {
        let r2 = x.iter().map(|v| v * v).sum::<f64>() / (self.ell * self.ell);
        if r2 >= 1.0 {
            return [C::new(0.0, 0.0); 3];
        }
        let cut = (1.0 - r2) * (1.0 - r2);
        let mut out = [C::new(0.0, 0.0); 3];
        for b in &self.bumps {
            let d2: f64 = (0..3).map(|i| (x[i] - b.center[i]).powi(2)).sum();
            let phase: f64 = (0..3).map(|i| b.wave[i] * x[i]).sum();
            let s = C::from_polar(cut * (-d2 / (2.0 * b.width * b.width)).exp(), phase);
            for i in 0..3 {
                out[i] += b.amplitude[i] * s;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_volume() {
        let l = Lattice::new(16, 1.0).unwrap();
        for radius in [1.0, 0.5] {
            let f = SourceField::on_ball(&l, radius, |_| [C::new(1.0, 0.0); 3]).unwrap();
            let s: f64 = f.weights.iter().sum();
            assert!((s - ball_volume(radius)).abs() <= 1e-10 * ball_volume(radius));
        }
    }

    #[test]
    fn lattice_geometry() {
        let l = Lattice::new(4, 2.0).unwrap();
        assert_eq!(l.point([0, 0, 0]), [-2.0; 3]);
        assert_eq!(l.point([2, 2, 2]), [0.0; 3]);
        assert_eq!(l.ball_indices(1.01).len(), 7);
    }

    #[test]
    fn smooth_source_vanishes_outside() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let s = SmoothSource::random(&mut rng, 1.0, 2.0);
        assert_eq!(s.eval(&[1.0, 0.0, 0.0]), [C::new(0.0, 0.0); 3]);
        assert!(s.eval(&[0.1, 0.0, 0.0]).iter().any(|v| v.norm() > 0.0));
    }
}
