use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::convolve::{convolve, convolve_lattice, Convolution, SingularRule};
use super::field::{ball_volume, weighted_norm, Lattice, SmoothSource, SourceField};
use super::kernel::{Medium, WaveNumbers};
use crate::bounds::{bound_fundamental, BoundReport};
use crate::{Error, Result};

/// Quadrature nodes for norms over `B_ell`.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetSet {
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl TargetSet {
    pub fn ball(lattice: &Lattice, ell: f64) -> Self {
        let nodes: Vec<[f64; 3]> = lattice.ball_indices(ell).iter().map(|i| lattice.point(*i)).collect();
        let w = ball_volume(ell) / nodes.len() as f64;
        Self { weights: vec![w; nodes.len()], nodes }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalCheck {
    pub kappa_s: f64,
    /// `ω²‖u‖/‖f‖`.
    pub ratio: f64,
    pub bound: f64,
    pub slack: f64,
    /// Largest componentwise `ω²‖G^A⋆f_i‖/‖f_i‖`.
    pub scalar_ratio: f64,
    /// `‖(∇²G^E)⋆f‖/‖f‖ = ω²‖u − G^A⋆f‖/‖f‖`.
    pub elastic_ratio: f64,
    pub elastic_bound: f64,
}

impl FundamentalCheck {
    pub fn report(&self) -> BoundReport {
        let mut r = BoundReport {
            bound_name: "fundamental".into(),
            bound_value: self.bound,
            inputs: Default::default(),
            symbolic: false,
            measured: None,
            slack: None,
        };
        r.inputs.insert("kappa_s".into(), self.kappa_s);
        r.with_measured(self.ratio)
    }
}

fn assemble_check(
    kappa_s: f64,
    omega: f64,
    f_weights: &[f64],
    f_values: &[[C; 3]],
    t_weights: &[f64],
    u: &Convolution,
) -> Result<FundamentalCheck> {
    let fnorm = weighted_norm(f_weights, f_values);
    if !(fnorm > 0.0) {
        return Err(Error::Domain("source has zero norm".into()));
    }
    let w2 = omega * omega;
    let ratio = w2 * weighted_norm(t_weights, &u.total) / fnorm;
    let mut scalar_ratio = 0.0f64;
    for c in 0..3 {
        let fc: f64 = f_weights.iter().zip(f_values).map(|(w, v)| w * v[c].norm_sqr()).sum::<f64>().sqrt();
        if fc > 1e-12 * fnorm {
            let uc: f64 = t_weights.iter().zip(&u.scalar).map(|(w, v)| w * v[c].norm_sqr()).sum::<f64>().sqrt();
            scalar_ratio = scalar_ratio.max(w2 * uc / fc);
        }
    }
    let diff: Vec<[C; 3]> = u.total.iter().zip(&u.scalar).map(|(a, b)| std::array::from_fn(|i| a[i] - b[i])).collect();
    let elastic_ratio = w2 * weighted_norm(t_weights, &diff) / fnorm;
    let bound = bound_fundamental(kappa_s)?;
    Ok(FundamentalCheck {
        kappa_s,
        ratio,
        bound,
        slack: bound - ratio,
        scalar_ratio,
        elastic_ratio,
        elastic_bound: 4.0 + 16.0 * kappa_s,
    })
}

/// Measures `ω²‖u‖_ρ/‖f‖_ρ` on `targets ⊂ B_ell` against `4 + 17κ_S`.
pub fn verify_fundamental_bound(
    f: &SourceField,
    medium: &Medium,
    omega: f64,
    ell: f64,
    targets: &TargetSet,
) -> Result<FundamentalCheck> {
    let u = convolve(f, medium, omega, &targets.nodes, SingularRule::EqualVolumeBall)?;
    let kappa_s = WaveNumbers::new(medium, omega).k_s * ell;
    assemble_check(kappa_s, omega, &f.weights, &f.values, &targets.weights, &u)
}

/// Checks a batch of smooth sources sampled on the lattice nodes of `B_ell`.
pub fn verify_lattice_batch(
    lattice: &Lattice,
    ell: f64,
    medium: &Medium,
    omega: f64,
    sources: &[SmoothSource],
) -> Result<Vec<FundamentalCheck>> {
    let idx = lattice.ball_indices(ell);
    let nodes: Vec<[f64; 3]> = idx.iter().map(|i| lattice.point(*i)).collect();
    let w = ball_volume(ell) / nodes.len() as f64;
    let weights = vec![w; nodes.len()];
    let fields: Vec<Vec<[C; 3]>> = sources.iter().map(|s| nodes.iter().map(|x| s.eval(x)).collect()).collect();
    let convs = convolve_lattice(lattice, &idx, w, &fields, &idx, medium, omega)?;
    let kappa_s = WaveNumbers::new(medium, omega).k_s * ell;
    fields.iter().zip(&convs).map(|(f, u)| assemble_check(kappa_s, omega, &weights, f, &weights, u)).collect()
}

/// Relative discrete `L²` difference between the convolutions of `f` computed
/// on two lattices, compared on their common nodes inside `B_ell`.
pub fn two_grid_difference<F: Fn(&[f64; 3]) -> [C; 3] + Copy>(
    medium: &Medium,
    omega: f64,
    ell: f64,
    support: f64,
    n_coarse: usize,
    n_fine: usize,
    f: F,
) -> Result<f64> {
    let g = gcd(n_coarse, n_fine);
    let common = Lattice::new(g, ell)?;
    let targets: Vec<[f64; 3]> = common.ball_indices(ell).iter().map(|i| common.point(*i)).collect();
    let mut fields = Vec::new();
    for n in [n_coarse, n_fine] {
        let l = Lattice::new(n, ell)?;
        let src = SourceField::on_ball(&l, support, f)?;
        fields.push(convolve(&src, medium, omega, &targets, SingularRule::EqualVolumeBall)?.total);
    }
    let diff: f64 =
        fields[0].iter().zip(&fields[1]).map(|(a, b)| (0..3).map(|i| (a[i] - b[i]).norm_sqr()).sum::<f64>()).sum();
    let base: f64 = fields[1].iter().map(|b| b.iter().map(|v| v.norm_sqr()).sum::<f64>()).sum();
    Ok((diff / base).sqrt())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
