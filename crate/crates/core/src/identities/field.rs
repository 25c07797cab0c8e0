use num_complex::Complex64 as C;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Vector<const D: usize> = [C; D];
/// `g[j][l] = ∂_j v_l`.
pub type Gradient<const D: usize> = [[C; D]; D];
/// `h[j][k][l] = ∂_j ∂_k v_l`.
pub type Hessian<const D: usize> = [[[C; D]; D]; D];

const ZERO: C = C::new(0.0, 0.0);
const I: C = C::new(0.0, 1.0);

/// Smoothness class; decides the audit tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldClass {
    Polynomial { degree: u32 },
    Trigonometric,
    Bump,
    Discrete,
}

impl FieldClass {
    pub fn tolerance(&self) -> f64 {
        match self {
            FieldClass::Polynomial { .. } => 1e-8,
            FieldClass::Trigonometric | FieldClass::Bump => 1e-6,
            FieldClass::Discrete => 1e-2,
        }
    }
}

pub trait AnalyticField<const D: usize>: Send + Sync + std::fmt::Debug {
    fn value(&self, x: &[f64; D]) -> Vector<D>;
    fn grad(&self, x: &[f64; D]) -> Gradient<D>;
    fn hessian(&self, x: &[f64; D]) -> Hessian<D>;
    fn class(&self) -> FieldClass;
}

/// `div σ(v) = μΔv + (λ+μ)∇(div v)` for constant `μ, λ`.
pub fn div_sigma<const D: usize>(h: &Hessian<D>, mu: f64, lambda: f64) -> Vector<D> {
    let mut out = [ZERO; D];
    for (l, o) in out.iter_mut().enumerate() {
        for j in 0..D {
            *o += h[j][j][l] * mu + h[l][j][j] * (lambda + mu);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial<const D: usize> {
    pub coef: [C; D],
    pub exp: [u32; D],
}

/// Vector polynomial `Σ coef · x^exp`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<const D: usize> {
    pub terms: Vec<Monomial<D>>,
}

fn pow_deriv(x: f64, e: u32, k: u32) -> f64 {
    if k > e {
        return 0.0;
    }
    let falling: u32 = ((e - k + 1)..=e).product();
    falling as f64 * x.powi((e - k) as i32)
}

impl<const D: usize> Polynomial<D> {
    pub fn constant(c: [C; D]) -> Self {
        Self { terms: vec![Monomial { coef: c, exp: [0; D] }] }
    }

    /// `v_l = Σ_j a[l][j] x_j + b_l`.
    pub fn linear(a: [[C; D]; D], b: [C; D]) -> Self {
        let mut terms = vec![Monomial { coef: b, exp: [0; D] }];
        for j in 0..D {
            let mut exp = [0; D];
            exp[j] = 1;
            let mut coef = [ZERO; D];
            for l in 0..D {
                coef[l] = a[l][j];
            }
            terms.push(Monomial { coef, exp });
        }
        Self { terms }
    }

    /// Infinitesimal rotation `v = W x` with `W` skew.
    pub fn rigid_rotation(w: [[f64; D]; D]) -> Result<Self> {
        for i in 0..D {
            for j in 0..D {
                if (w[i][j] + w[j][i]).abs() > 1e-14 {
                    return Err(Error::Domain("rotation generator must be skew".into()));
                }
            }
        }
        Ok(Self::linear(w.map(|r| r.map(|v| C::new(v, 0.0))), [ZERO; D]))
    }

    /// All monomials of total degree `≤ degree` with random complex
    /// coefficients in `[-1, 1]² / ell^{|exp|}`.
    pub fn random<R: Rng>(rng: &mut R, degree: u32, ell: f64) -> Self {
        let mut terms = Vec::new();
        let mut exp = [0u32; D];
        loop {
            let total: u32 = exp.iter().sum();
            if total <= degree {
                let s = ell.powi(-(total as i32));
                let coef = std::array::from_fn(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * s);
                terms.push(Monomial { coef, exp });
            }
            let mut k = 0;
            loop {
                if k == D {
                    return Self { terms };
                }
                exp[k] += 1;
                if exp[k] <= degree {
                    break;
                }
                exp[k] = 0;
                k += 1;
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|m| m.exp.iter().sum::<u32>()).max().unwrap_or(0)
    }

    fn eval(&self, x: &[f64; D], d: [u32; D]) -> Vector<D> {
        let mut out = [ZERO; D];
        for m in &self.terms {
            let s: f64 = (0..D).map(|i| pow_deriv(x[i], m.exp[i], d[i])).product();
            if s != 0.0 {
                for l in 0..D {
                    out[l] += m.coef[l] * s;
                }
            }
        }
        out
    }
}

fn unit<const D: usize>(j: usize, k: Option<usize>) -> [u32; D] {
    let mut d = [0; D];
    d[j] += 1;
    if let Some(k) = k {
        d[k] += 1;
    }
    d
}

impl<const D: usize> AnalyticField<D> for Polynomial<D> {
    fn value(&self, x: &[f64; D]) -> Vector<D> {
        self.eval(x, [0; D])
    }
    fn grad(&self, x: &[f64; D]) -> Gradient<D> {
        std::array::from_fn(|j| self.eval(x, unit::<D>(j, None)))
    }
    fn hessian(&self, x: &[f64; D]) -> Hessian<D> {
        std::array::from_fn(|j| std::array::from_fn(|k| self.eval(x, unit::<D>(j, Some(k)))))
    }
    fn class(&self) -> FieldClass {
        FieldClass::Polynomial { degree: self.degree() }
    }
}

/// `p e^{i k·x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneWave<const D: usize> {
    pub k: [f64; D],
    pub p: [C; D],
}

impl<const D: usize> PlaneWave<D> {
    /// Polarization along the direction of propagation.
    pub fn pressure(direction: [f64; D], wavenumber: f64) -> Self {
        let n = crate::model::norm(&direction);
        let d = direction.map(|v| v / n);
        Self { k: d.map(|v| v * wavenumber), p: d.map(|v| C::new(v, 0.0)) }
    }

    /// Polarization orthogonal to the direction of propagation.
    pub fn shear(direction: [f64; D], wavenumber: f64) -> Self {
        let n = crate::model::norm(&direction);
        let d = direction.map(|v| v / n);
        // Gram-Schmidt on the coordinate axis least aligned with d
        let j = (0..D).min_by(|&a, &b| d[a].abs().total_cmp(&d[b].abs())).unwrap();
        let mut p: [f64; D] = std::array::from_fn(|i| if i == j { 1.0 } else { 0.0 });
        let dot: f64 = (0..D).map(|i| p[i] * d[i]).sum();
        for i in 0..D {
            p[i] -= dot * d[i];
        }
        let pn = crate::model::norm(&p);
        Self { k: d.map(|v| v * wavenumber), p: p.map(|v| C::new(v / pn, 0.0)) }
    }

    fn phase(&self, x: &[f64; D]) -> C {
        let t: f64 = (0..D).map(|i| self.k[i] * x[i]).sum();
        C::new(0.0, t).exp()
    }
}

impl<const D: usize> AnalyticField<D> for PlaneWave<D> {
    fn value(&self, x: &[f64; D]) -> Vector<D> {
        let e = self.phase(x);
        self.p.map(|p| p * e)
    }
    fn grad(&self, x: &[f64; D]) -> Gradient<D> {
        let e = self.phase(x);
        std::array::from_fn(|j| std::array::from_fn(|l| I * self.k[j] * self.p[l] * e))
    }
    fn hessian(&self, x: &[f64; D]) -> Hessian<D> {
        let e = self.phase(x);
        std::array::from_fn(|j| {
            std::array::from_fn(|k| std::array::from_fn(|l| -self.k[j] * self.k[k] * self.p[l] * e))
        })
    }
    fn class(&self) -> FieldClass {
        FieldClass::Trigonometric
    }
}

/// `a (1 − |x−c|²/R²)⁴` inside the ball `B_R(c)`, zero outside.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialBump<const D: usize> {
    pub center: [f64; D],
    pub radius: f64,
    pub amplitude: [C; D],
}

impl<const D: usize> RadialBump<D> {
    fn parts(&self, x: &[f64; D]) -> Option<([f64; D], f64)> {
        let y: [f64; D] = std::array::from_fn(|i| x[i] - self.center[i]);
        let s = y.iter().map(|v| v * v).sum::<f64>() / (self.radius * self.radius);
        (s < 1.0).then_some((y, s))
    }
}

impl<const D: usize> AnalyticField<D> for RadialBump<D> {
    fn value(&self, x: &[f64; D]) -> Vector<D> {
        match self.parts(x) {
            Some((_, s)) => self.amplitude.map(|a| a * (1.0 - s).powi(4)),
            None => [ZERO; D],
        }
    }
    fn grad(&self, x: &[f64; D]) -> Gradient<D> {
        let Some((y, s)) = self.parts(x) else { return [[ZERO; D]; D] };
        let r2 = self.radius * self.radius;
        std::array::from_fn(|j| {
            let g = -8.0 * (1.0 - s).powi(3) * y[j] / r2;
            self.amplitude.map(|a| a * g)
        })
    }
    fn hessian(&self, x: &[f64; D]) -> Hessian<D> {
        let Some((y, s)) = self.parts(x) else { return [[[ZERO; D]; D]; D] };
        let r2 = self.radius * self.radius;
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let delta = if j == k { 1.0 } else { 0.0 };
                let g = 48.0 * (1.0 - s).powi(2) * y[j] * y[k] / (r2 * r2) - 8.0 * (1.0 - s).powi(3) * delta / r2;
                self.amplitude.map(|a| a * g)
            })
        })
    }
    fn class(&self) -> FieldClass {
        FieldClass::Bump
    }
}

/// `(|x|² − r²) w(x)`, zero on the sphere of radius `r`.
#[derive(Debug)]
pub struct Vanishing<const D: usize> {
    pub radius: f64,
    pub inner: Box<dyn AnalyticField<D>>,
}

impl<const D: usize> Vanishing<D> {
    pub fn new(radius: f64, inner: Box<dyn AnalyticField<D>>) -> Self {
        Self { radius, inner }
    }

    fn q(&self, x: &[f64; D]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>() - self.radius * self.radius
    }
}

impl<const D: usize> AnalyticField<D> for Vanishing<D> {
    fn value(&self, x: &[f64; D]) -> Vector<D> {
        let q = self.q(x);
        self.inner.value(x).map(|w| w * q)
    }
    fn grad(&self, x: &[f64; D]) -> Gradient<D> {
        let (q, w, g) = (self.q(x), self.inner.value(x), self.inner.grad(x));
        std::array::from_fn(|j| std::array::from_fn(|l| w[l] * (2.0 * x[j]) + g[j][l] * q))
    }
    fn hessian(&self, x: &[f64; D]) -> Hessian<D> {
        let (q, w, g, h) = (self.q(x), self.inner.value(x), self.inner.grad(x), self.inner.hessian(x));
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                std::array::from_fn(|l| {
                    let delta = if j == k { 2.0 } else { 0.0 };
                    w[l] * delta + g[k][l] * (2.0 * x[j]) + g[j][l] * (2.0 * x[k]) + h[j][k][l] * q
                })
            })
        })
    }
    fn class(&self) -> FieldClass {
        match self.inner.class() {
            FieldClass::Polynomial { degree } => FieldClass::Polynomial { degree: degree + 2 },
            c => c,
        }
    }
}

/// Sum of fields; crossing plane waves give oscillating quadratic forms.
#[derive(Debug)]
pub struct Superposition<const D: usize> {
    pub parts: Vec<Box<dyn AnalyticField<D>>>,
}

impl<const D: usize> AnalyticField<D> for Superposition<D> {
    fn value(&self, x: &[f64; D]) -> Vector<D> {
        let mut out = [ZERO; D];
        for p in &self.parts {
            let v = p.value(x);
            for l in 0..D {
                out[l] += v[l];
            }
        }
        out
    }
    fn grad(&self, x: &[f64; D]) -> Gradient<D> {
        let mut out = [[ZERO; D]; D];
        for p in &self.parts {
            let g = p.grad(x);
            for j in 0..D {
                for l in 0..D {
                    out[j][l] += g[j][l];
                }
            }
        }
        out
    }
    fn hessian(&self, x: &[f64; D]) -> Hessian<D> {
        let mut out = [[[ZERO; D]; D]; D];
        for p in &self.parts {
            let h = p.hessian(x);
            for j in 0..D {
                for k in 0..D {
                    for l in 0..D {
                        out[j][k][l] += h[j][k][l];
                    }
                }
            }
        }
        out
    }
    fn class(&self) -> FieldClass {
        let classes: Vec<FieldClass> = self.parts.iter().map(|p| p.class()).collect();
        if classes.iter().all(|c| matches!(c, FieldClass::Polynomial { .. })) {
            let degree = classes
                .iter()
                .map(|c| match c {
                    FieldClass::Polynomial { degree } => *degree,
                    _ => 0,
                })
                .max()
                .unwrap_or(0);
            return FieldClass::Polynomial { degree };
        }
        classes
            .into_iter()
            .max_by(|a, b| a.tolerance().total_cmp(&b.tolerance()))
            .unwrap_or(FieldClass::Polynomial { degree: 0 })
    }
}

/// Largest relative discrepancy between `grad`/`hessian` and central
/// differences of `value`/`grad` at `x`.
pub fn finite_difference_error<const D: usize>(f: &dyn AnalyticField<D>, x: &[f64; D], step: f64) -> f64 {
    let g = f.grad(x);
    let h = f.hessian(x);
    let scale_g = g.iter().flatten().map(|z| z.norm()).fold(1e-300, f64::max);
    let scale_h = h.iter().flatten().flatten().map(|z| z.norm()).fold(1e-300, f64::max);
    let mut err: f64 = 0.0;
    for j in 0..D {
        let mut xp = *x;
        let mut xm = *x;
        xp[j] += step;
        xm[j] -= step;
        let (vp, vm) = (f.value(&xp), f.value(&xm));
        let (gp, gm) = (f.grad(&xp), f.grad(&xm));
        for l in 0..D {
            let fd = (vp[l] - vm[l]) / (2.0 * step);
            err = err.max((fd - g[j][l]).norm() / scale_g);
            for k in 0..D {
                let fd = (gp[k][l] - gm[k][l]) / (2.0 * step);
                err = err.max((fd - h[j][k][l]).norm() / scale_h);
            }
        }
    }
    err
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fields2: Vec<Box<dyn AnalyticField<2>>> = vec![
            Box::new(Polynomial::<2>::random(&mut rng, 3, 1.0)),
            Box::new(PlaneWave::<2>::shear([0.3, 0.8], 2.5)),
            Box::new(PlaneWave::<2>::pressure([-1.0, 0.2], 1.5)),
            Box::new(RadialBump { center: [0.1, 0.2], radius: 0.6, amplitude: [C::new(1.0, 0.5), C::new(-0.3, 0.0)] }),
            Box::new(Vanishing::new(0.5, Box::new(PlaneWave::<2>::shear([1.0, 1.0], 2.0)))),
        ];
        for f in &fields2 {
            assert!(finite_difference_error(f.as_ref(), &[0.31, -0.22], 1e-5) < 1e-6, "{f:?}");
        }
        let fields3: Vec<Box<dyn AnalyticField<3>>> = vec![
            Box::new(Polynomial::<3>::random(&mut rng, 3, 1.0)),
            Box::new(PlaneWave::<3>::shear([0.3, 0.8, -0.2], 2.5)),
            Box::new(Vanishing::new(0.4, Box::new(Polynomial::<3>::random(&mut rng, 2, 1.0)))),
        ];
        for f in &fields3 {
            assert!(finite_difference_error(f.as_ref(), &[0.31, -0.22, 0.4], 1e-5) < 1e-6, "{f:?}");
        }
    }

    #[test]
    fn wave_polarizations() {
        let s = PlaneWave::<3>::shear([1.0, 2.0, 2.0], 3.0);
        let dot: C = (0..3).map(|i| s.p[i] * s.k[i]).sum();
        assert!(dot.norm() < 1e-14);
        // shear waves are divergence free, pressure waves curl free
        let g = s.grad(&[0.1, 0.2, 0.3]);
        assert!((g[0][0] + g[1][1] + g[2][2]).norm() < 1e-13);
        let p = PlaneWave::<2>::pressure([3.0, 4.0], 2.0);
        let g = p.grad(&[0.3, -0.1]);
        assert!((g[0][1] - g[1][0]).norm() < 1e-14);
    }

    #[test]
    fn div_sigma_of_plane_waves() {
        // −div σ = ρω² v for a plane wave on its dispersion relation
        let (mu, lam) = (0.7, 2.1);
        let s = PlaneWave::<2>::shear([0.6, 0.8], 1.9);
        let x = [0.2, 0.4];
        let ds = div_sigma(&s.hessian(&x), mu, lam);
        let v = s.value(&x);
        for l in 0..2 {
            assert!((ds[l] + v[l] * mu * 1.9 * 1.9).norm() < 1e-13);
        }
        let p = PlaneWave::<2>::pressure([0.6, 0.8], 1.9);
        let ds = div_sigma(&p.hessian(&x), mu, lam);
        let v = p.value(&x);
        for l in 0..2 {
            assert!((ds[l] + v[l] * (lam + 2.0 * mu) * 1.9 * 1.9).norm() < 1e-13);
        }
    }

    #[test]
    fn rotation_requires_skew_generator() {
        assert!(Polynomial::<2>::rigid_rotation([[0.0, -1.0], [1.0, 0.0]]).is_ok());
        assert!(Polynomial::<2>::rigid_rotation([[0.0, 1.0], [1.0, 0.0]]).is_err());
        let r = Polynomial::<2>::rigid_rotation([[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(r.value(&[2.0, 3.0]), [C::new(-3.0, 0.0), C::new(2.0, 0.0)]);
    }

    #[test]
    fn random_polynomial_has_all_monomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(Polynomial::<2>::random(&mut rng, 3, 1.0).terms.len(), 10);
        assert_eq!(Polynomial::<3>::random(&mut rng, 2, 1.0).terms.len(), 10);
    }
}
