use elastab::greens::*;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> [f64; 3] {
    loop {
        let p: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-rmax..rmax));
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if r > rmin && r < rmax {
            return p;
        }
    }
}

fn shift(y: &[f64; 3], d: [f64; 3]) -> [f64; 3] {
    [y[0] + d[0], y[1] + d[1], y[2] + d[2]]
}

/// `h(y + e) − h(y)` for `h = e^{ikr}/r`, without cancellation.
fn dh(k: f64, y: &[f64; 3], e: [f64; 3]) -> C {
    let r0 = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
    let p = shift(y, e);
    let r1 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let ye: f64 = (0..3).map(|i| y[i] * e[i]).sum();
    let ee: f64 = e.iter().map(|v| v * v).sum();
    let dr = (2.0 * ye + ee) / (r0 + r1);
    let em1 = C::new(0.0, 2.0 * (k * dr / 2.0).sin()) * C::from_polar(1.0, k * dr / 2.0);
    C::from_polar(1.0, k * r0) * (em1 / r1 - dr / (r0 * r1))
}

#[test]
fn hessian_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let y0 = [0.7, -0.3, 0.5];
    let mut points = vec![y0];
    points.extend((0..100).map(|_| random_point(&mut rng, 0.5, 2.0)));
    for (n, y) in points.iter().enumerate() {
        let k = if n == 0 { 2.0 } else { rng.gen_range(0.0..4.0) };
        let hess = hessian_radial(k, y).unwrap();
        let step = 1e-5;
        let scale = hess.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        for i in 0..3 {
            for j in 0..3 {
                let fd = if i == j {
                    let mut e = [0.0; 3];
                    e[i] = step;
                    (dh(k, y, e) + dh(k, y, e.map(|c| -c))) / (step * step)
                } else {
                    let at = |si: f64, sj: f64| {
                        let mut e = [0.0; 3];
                        e[i] = si * step;
                        e[j] = sj * step;
                        dh(k, y, e)
                    };
                    (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * step * step)
                };
                assert!(
                    (fd - hess[i][j]).norm() <= 1e-6 * scale,
                    "point {n} entry {i}{j}: {:e}",
                    (fd - hess[i][j]).norm() / scale
                );
            }
        }
    }
}

/// `−ρω²G e − μΔ(G e) − (λ+μ)∇div(G e)` by fourth-order differences.
fn pde_residual(m: &Medium, omega: f64, y: &[f64; 3], col: usize, step: f64) -> (f64, f64) {
    let ge = |p: [f64; 3]| -> [C; 3] {
        let g = green_tensor(&p, m, omega).unwrap().g;
        [g[0][col], g[1][col], g[2][col]]
    };
    let d1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
    let d2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
    // second derivatives ∂_a∂_b of each component
    let mut dd = [[[C::new(0.0, 0.0); 3]; 3]; 3];
    for a in 0..3 {
        for b in a..3 {
            let mut acc = [C::new(0.0, 0.0); 3];
            if a == b {
                for (s, c) in d2.iter().enumerate() {
                    let mut p = *y;
                    p[a] += (s as f64 - 2.0) * step;
                    let v = ge(p);
                    for k in 0..3 {
                        acc[k] += v[k] * *c;
                    }
                }
            } else {
                for (s, ca) in d1.iter().enumerate() {
                    for (t, cb) in d1.iter().enumerate() {
                        if *ca == 0.0 || *cb == 0.0 {
                            continue;
                        }
                        let mut p = *y;
                        p[a] += (s as f64 - 2.0) * step;
                        p[b] += (t as f64 - 2.0) * step;
                        let v = ge(p);
                        for k in 0..3 {
                            acc[k] += v[k] * (ca * cb);
                        }
                    }
                }
            }
            for k in 0..3 {
                dd[a][b][k] = acc[k] / (step * step);
                dd[b][a][k] = dd[a][b][k];
            }
        }
    }
    let u = ge(*y);
    let mut res = 0.0;
    let mut scale = 0.0;
    for i in 0..3 {
        let mass = u[i] * (-m.rho * omega * omega);
        let lap: C = (0..3).map(|a| dd[a][a][i]).sum::<C>() * (-m.mu);
        let graddiv: C = (0..3).map(|k| dd[i][k][k]).sum::<C>() * (-(m.lambda + m.mu));
        res += (mass + lap + graddiv).norm_sqr();
        scale += mass.norm_sqr() + lap.norm_sqr() + graddiv.norm_sqr();
    }
    (res.sqrt(), scale.sqrt())
}

#[test]
fn green_tensor_solves_the_pde() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 0..50 {
        let m = Medium::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(0.0..20.0)).unwrap();
        let omega = rng.gen_range(0.5..4.0);
        let y = random_point(&mut rng, 0.5, 2.0);
        let col = n % 3;
        let (res, scale) = pde_residual(&m, omega, &y, col, 2e-3);
        assert!(res <= 1e-4 * scale, "point {n}: {res:e} vs {scale:e}");
    }
}

#[test]
fn symmetry_and_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m = Medium::new(1.0, 1.3, 4.0).unwrap();
    for _ in 0..50 {
        let y = random_point(&mut rng, 0.01, 3.0);
        let g = green_tensor(&y, &m, 2.2).unwrap().g;
        let gm = green_tensor(&y.map(|v| -v), &m, 2.2).unwrap().g;
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g[i][j], g[j][i]);
                assert_eq!(g[i][j], gm[i][j]);
            }
        }
    }
}

#[test]
fn static_limit_is_kelvin() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let (mu, lambda) = (rng.gen_range(0.5..2.0), rng.gen_range(0.0..1e3));
        let m = Medium::new(1.0, mu, lambda).unwrap();
        let y = random_point(&mut rng, 0.1, 2.0);
        let g = green_tensor(&y, &m, 1e-10).unwrap().g;
        let k = kelvin_tensor(&y, mu, lambda).unwrap();
        let scale = k.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        for i in 0..3 {
            for j in 0..3 {
                assert!((g[i][j] - k[i][j]).norm() <= 1e-8 * scale);
            }
        }
    }
}

#[test]
fn two_grid_constant_source() {
    let m = Medium::new(1.0, 1.0, 1.0).unwrap();
    let e = two_grid_difference(&m, 1.0, 1.0, 0.5, 16, 24, |_| [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)])
        .unwrap();
    assert!(e <= 0.02, "two-grid difference {e}");
}

#[test]
fn random_sources_at_unit_kappa() {
    let m = Medium::new(1.0, 1.0, 1.0).unwrap();
    let l = Lattice::new(14, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sources: Vec<SmoothSource> = (0..5).map(|_| SmoothSource::random(&mut rng, 1.0, 1.0)).collect();
    for c in verify_lattice_batch(&l, 1.0, &m, 1.0, &sources).unwrap() {
        assert!((c.kappa_s - 1.0).abs() < 1e-15);
        assert!(c.ratio <= 21.0);
        assert!(c.scalar_ratio <= c.kappa_s * 1.02);
        assert!(c.elastic_ratio <= c.elastic_bound);
    }
}

#[test]
fn incompressible_sweep_stays_bounded() {
    let l = Lattice::new(12, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let sources: Vec<SmoothSource> = (0..3).map(|_| SmoothSource::random(&mut rng, 1.0, 2.0)).collect();
    for ratio in [1.0, 1e3] {
        let m = Medium::new(1.0, 1.0, ratio).unwrap();
        for c in verify_lattice_batch(&l, 1.0, &m, 2.0, &sources).unwrap() {
            assert!(c.ratio <= c.bound, "lambda/mu {ratio}: {} > {}", c.ratio, c.bound);
        }
    }
}
