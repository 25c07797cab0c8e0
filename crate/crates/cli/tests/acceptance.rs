//! Acceptance suite. Run with `cargo test -p elastab-cli --test acceptance -- --nocapture`
//! to see one line per criterion.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use elastab::bounds::{bound_fundamental, bound_obstacle_ideal, quadratic_root_bound};
use elastab::fem::{loglog_slope, sweep, SweepRobin, SweepSpec};
use elastab::greens::{green_tensor, hessian_radial, kelvin_tensor, Medium};
use elastab::identities::{IdentityReport, ReportKind};
use elastab::Complex64 as C;
use elastab_cli::commands::greens::{fourier_rows, source_rows, GreensConfig};
use elastab_cli::commands::identity::{suite_reports, IdentityConfig, Suite};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

/// `κ_S ∈ {1, 2, 4, 8}` on the half-annulus with unit impedance, order 2,
/// ten points per wavelength.
fn frequency_sweep() -> SweepSpec {
    SweepSpec { kappas: vec![1.0, 2.0, 4.0, 8.0], order: 2, points_per_wavelength: 10.0, ..Default::default() }
}

fn criteria_1_2() -> (Verdict, Verdict) {
    let start = Instant::now();
    let cfg = GreensConfig::default();
    assert!(cfg.n >= 20 && cfg.sources == 20 && cfg.kappas == [0.5, 1.0, 2.0, 4.0]);
    let rows = source_rows(&cfg).expect("lattice verification runs");
    let seconds = start.elapsed().as_secs_f64();
    let violations = rows.iter().filter(|r| r.ratio > 4.0 + 17.0 * r.kappa_s).count();
    let worst_delta = rows.iter().filter_map(|r| r.two_grid_delta).fold(0.0, f64::max);
    let all_checked = rows.iter().all(|r| r.two_grid_delta.is_some());
    let worst_ratio = rows.iter().map(|r| r.ratio / (4.0 + 17.0 * r.kappa_s)).fold(0.0, f64::max);
    let one = verdict(
        rows.len() == 80 && violations == 0 && all_checked && worst_delta <= 0.02 && seconds <= 600.0,
        format!(
            "{} rows on {}^3 lattice, {violations} violations, max ratio/bound {worst_ratio:.3}, \
             max two-grid delta {worst_delta:.2e}, {seconds:.0}s",
            rows.len(),
            cfg.n
        ),
    );
    let scalar_violations = rows.iter().filter(|r| r.scalar_ratio > r.kappa_s * 1.02).count();
    let worst_scalar = rows.iter().map(|r| r.scalar_ratio / r.kappa_s).fold(0.0, f64::max);
    let two = verdict(
        scalar_violations == 0,
        format!("{scalar_violations} violations, max scalar ratio/kappa {worst_scalar:.4}"),
    );
    (one, two)
}

fn criterion_3() -> Verdict {
    let cfg = GreensConfig::default();
    let ratios: Vec<f64> = cfg.fourier.iter().map(|c| c.lambda_over_mu).collect();
    let covers = [0.0, 1.0, 1e3].iter().all(|r| ratios.contains(r));
    let rows = fourier_rows(&cfg).expect("multiplier norms");
    let worst = rows.iter().map(|r| r.multiplier_norm / r.bound).fold(0.0, f64::max);
    verdict(
        rows.len() == 10 && covers && cfg.fourier_tol == 1e-8 && rows.iter().all(|r| r.multiplier_norm <= r.bound),
        format!("{} triples, max norm/bound {worst:.3}", rows.len()),
    )
}

fn random_point(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> [f64; 3] {
    loop {
        let p: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-rmax..rmax));
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if r > rmin && r < rmax {
            return p;
        }
    }
}

/// `h(y + e) − h(y)` for `h = e^{ikr}/r`, free of cancellation.
fn dh(k: f64, y: &[f64; 3], e: [f64; 3]) -> C {
    let r0 = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
    let p = [y[0] + e[0], y[1] + e[1], y[2] + e[2]];
    let r1 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let ye: f64 = (0..3).map(|i| y[i] * e[i]).sum();
    let ee: f64 = e.iter().map(|v| v * v).sum();
    let dr = (2.0 * ye + ee) / (r0 + r1);
    let em1 = C::new(0.0, 2.0 * (k * dr / 2.0).sin()) * C::from_polar(1.0, k * dr / 2.0);
    C::from_polar(1.0, k * r0) * (em1 / r1 - dr / (r0 * r1))
}

fn hessian_error(k: f64, y: &[f64; 3]) -> f64 {
    let hess = hessian_radial(k, y).expect("hessian");
    let step = 1e-5;
    let scale = hess.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
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
            worst = worst.max((fd - hess[i][j]).norm() / scale);
        }
    }
    worst
}

/// Relative residual of `−ρω²G e − μΔ(G e) − (λ+μ)∇div(G e)` by
/// fourth-order differences.
fn pde_residual(m: &Medium, omega: f64, y: &[f64; 3], col: usize, step: f64) -> f64 {
    let ge = |p: [f64; 3]| -> [C; 3] {
        let g = green_tensor(&p, m, omega).expect("green tensor").g;
        [g[0][col], g[1][col], g[2][col]]
    };
    let d1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
    let d2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
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
    let (mut res, mut scale) = (0.0, 0.0);
    for i in 0..3 {
        let mass = u[i] * (-m.rho * omega * omega);
        let lap: C = (0..3).map(|a| dd[a][a][i]).sum::<C>() * (-m.mu);
        let graddiv: C = (0..3).map(|k| dd[i][k][k]).sum::<C>() * (-(m.lambda + m.mu));
        res += (mass + lap + graddiv).norm_sqr();
        scale += mass.norm_sqr() + lap.norm_sqr() + graddiv.norm_sqr();
    }
    (res / scale).sqrt()
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let hess = (0..100)
        .map(|_| {
            let y = random_point(&mut rng, 0.5, 2.0);
            hessian_error(rng.gen_range(0.0..4.0), &y)
        })
        .fold(0.0, f64::max);
    let pde = (0..50)
        .map(|n| {
            let m = Medium::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(0.0..20.0)).unwrap();
            let omega = rng.gen_range(0.5..4.0);
            let y = random_point(&mut rng, 0.5, 2.0);
            pde_residual(&m, omega, &y, n % 3, 2e-3)
        })
        .fold(0.0, f64::max);
    let kelvin = (0..50)
        .map(|_| {
            let (mu, lambda) = (rng.gen_range(0.5..2.0), rng.gen_range(0.0..1e3));
            let m = Medium::new(1.0, mu, lambda).unwrap();
            let y = random_point(&mut rng, 0.1, 2.0);
            let g = green_tensor(&y, &m, 1e-10).unwrap().g;
            let k = kelvin_tensor(&y, mu, lambda).unwrap();
            let scale = k.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
            (0..9).map(|e| (g[e / 3][e % 3] - k[e / 3][e % 3]).norm() / scale).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    verdict(
        hess <= 1e-6 && pde <= 1e-4 && kelvin <= 1e-8,
        format!("hessian fd {hess:.1e}, pde residual {pde:.1e}, static limit {kelvin:.1e}"),
    )
}

fn analytic_tolerance(r: &IdentityReport) -> f64 {
    if ["wave", "bump"].iter().any(|w| r.name.contains(w)) {
        1e-6
    } else {
        1e-8
    }
}

fn criterion_5() -> Verdict {
    let cfg = IdentityConfig { seed: 5, ..Default::default() };
    let run = |s| suite_reports(s, &cfg).expect("identity suite");
    let garding = run(Suite::Garding);
    let garding_ok = garding.len() == 20 && garding.iter().all(|r| r.pass && r.rel_gap <= 1e-10);
    let mut analytic = Vec::new();
    for s in [Suite::Rellich, Suite::Mass, Suite::Robin, Suite::Morawetz] {
        analytic.extend(run(s));
    }
    let identities: Vec<&IdentityReport> = analytic.iter().filter(|r| r.kind == ReportKind::Equality).collect();
    let identity_bad: Vec<&str> = identities
        .iter()
        .filter(|r| !(r.pass && r.rel_gap <= analytic_tolerance(r)))
        .map(|r| r.name.as_str())
        .collect();
    let others_ok = analytic.iter().all(|r| r.pass);
    let korn = run(Suite::Korn);
    let korn_ok = korn.len() == 200 && korn.iter().all(|r| r.slack >= 0.0);
    let min_korn = korn.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    verdict(
        garding_ok && identity_bad.is_empty() && others_ok && korn_ok,
        format!(
            "{} garding, {} identity audits ({} off), {} korn reports, min korn slack {min_korn:.2e}",
            garding.len(),
            identities.len(),
            identity_bad.len(),
            korn.len()
        ),
    )
}

fn criterion_6() -> Verdict {
    let ideal = bound_obstacle_ideal(1.0, 3).unwrap() == (7.0625, 8.0);
    let fundamental = bound_fundamental(0.0).unwrap() == 4.0;
    let dominance = (2..=3).all(|d| {
        (0..=12).all(|k| {
            let (full, simplified) = bound_obstacle_ideal(2f64.powi(k) / 16.0, d).unwrap();
            full <= simplified
        })
    });
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let root_ok = (0..1000).all(|_| {
        let (a, b, c): (f64, f64, f64) = (rng.gen_range(1e-3..1e3), rng.gen_range(1e-3..1e3), rng.gen_range(1e-3..1e3));
        let x = (b + (b * b + 4.0 * a * c).sqrt()) / (2.0 * a);
        a * x <= quadratic_root_bound(a, b, c).unwrap() * (1.0 + 1e-12)
    });
    verdict(
        ideal && fundamental && dominance && root_ok,
        format!("ideal(1,3) {ideal}, fundamental(0) {fundamental}, dominance {dominance}, root bound {root_ok}"),
    )
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let table = sweep(&frequency_sweep()).expect("sweep");
    let seconds = start.elapsed().as_secs_f64();
    let rows_ok = table.rows.len() == 4
        && table.rows.iter().all(|r| {
            r.error.is_none() && r.points_per_wavelength >= 10.0 && r.c_emp.unwrap() <= r.bound_ideal.unwrap()
        });
    let c: Vec<String> = table.rows.iter().map(|r| format!("{:.3}", r.c_emp.unwrap_or(f64::NAN))).collect();
    let slope = loglog_slope(&table.rows, 2.0, 8.0).unwrap_or(f64::NAN);
    verdict(
        rows_ok && slope <= 1.3 && seconds <= 900.0,
        format!(
            "C_emp [{}] within per-row bounds: {rows_ok}; slope over [2,8] {slope:.3} (target <= 1.3), {seconds:.0}s",
            c.join(", ")
        ),
    )
}

fn criterion_8() -> Verdict {
    let base = SweepSpec { kappas: vec![2.0], lambda_over_mu: vec![1.0, 1e2, 1e4], order: 2, ..Default::default() };
    let fixed = sweep(&base).expect("sweep");
    let c: Vec<f64> = fixed.rows.iter().filter_map(|r| r.c_emp).collect();
    let spread = c.iter().cloned().fold(0.0, f64::max) / c.iter().cloned().fold(f64::INFINITY, f64::min);
    let realistic = sweep(&SweepSpec { robin: SweepRobin::Realistic, ..base }).expect("sweep");
    let realistic_ok = realistic.rows.iter().all(|r| r.c_emp.unwrap() <= r.bound_realistic.unwrap());
    verdict(
        c.len() == 3 && spread <= 1.25 && realistic_ok,
        format!("max/min C_emp {spread:.4}, realistic rows within bound: {realistic_ok}"),
    )
}

fn criterion_9() -> Verdict {
    let cfg = IdentityConfig { chain: frequency_sweep(), ..Default::default() };
    let reports = suite_reports(Suite::Chain, &cfg).expect("chain suite");
    let links: Vec<&IdentityReport> = reports.iter().filter(|r| r.name.starts_with("chain.kappa_")).collect();
    let min = links.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    verdict(links.len() == 20 && min >= 0.0, format!("{} links on 4 rows, min slack {min:.3}", links.len()))
}

fn run_cli(args: &[&str], out: &Path) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_elastab"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

/// Every file of `dir`, with the timing stage list removed from the manifest.
fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let mut bytes = std::fs::read(&p).unwrap();
            if name == elastab_cli::MANIFEST {
                let mut v: Value = serde_json::from_slice(&bytes).unwrap();
                v.as_object_mut().unwrap().remove("stages");
                bytes = serde_json::to_vec(&v).unwrap();
            }
            (name, bytes)
        })
        .collect();
    files.sort();
    files
}

fn criterion_10() -> Verdict {
    let tmp = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = tmp.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let bounds = write("bounds.json", r#"{"kappas": [0.5, 1, 2, 4], "lambda_over_mu": [1, 100]}"#);
    let greens = write(
        "greens.json",
        r#"{"kappas": [1], "sources": 2, "n": 20, "n_check": 16,
            "fourier": [{"k_s": 1, "lambda_over_mu": 1}, {"k_s": 2, "lambda_over_mu": 1000}]}"#,
    );
    let fem = write("fem.json", r#"{"kappas": [1, 2], "lambda_over_mu": [1, 100]}"#);
    let runs: [(&str, Vec<&str>); 4] = [
        ("bounds", vec!["bounds", "--config", &bounds]),
        ("greens-verify", vec!["greens-verify", "--config", &greens, "--seed", "3"]),
        ("fem-sweep", vec!["fem-sweep", "--config", &fem, "--seed", "3"]),
        ("identity-check", vec!["identity-check", "--suite", "all", "--seed", "7"]),
    ];
    let mut differing = Vec::new();
    for (name, args) in &runs {
        let a = tmp.path().join(format!("{name}-a"));
        let b = tmp.path().join(format!("{name}-b"));
        let codes = (run_cli(args, &a), run_cli(args, &b));
        if codes.0 != codes.1 || codes.0 != 0 || snapshot(&a) != snapshot(&b) {
            differing.push(format!("{name} {codes:?}"));
        }
    }
    verdict(differing.is_empty(), format!("4 subcommands rerun, differing: {differing:?}"))
}

#[test]
fn acceptance() {
    let (c1, c2) = criteria_1_2();
    let results = vec![
        ("1 fundamental-solution bound", c1),
        ("2 scalar-part bound", c2),
        ("3 Fourier multiplier bound", criterion_3()),
        ("4 kernel correctness", criterion_4()),
        ("5 identity suite", criterion_5()),
        ("6 bound formulas", criterion_6()),
        ("7 FEM frequency scaling", criterion_7()),
        ("8 incompressibility robustness", criterion_8()),
        ("9 estimate-chain audit", criterion_9()),
        ("10 determinism", criterion_10()),
    ];
    for (name, v) in &results {
        println!("criterion {name}: {} ({})", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    let failed: Vec<&str> = results.iter().filter(|(_, v)| !v.pass).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
