use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::assembly::AssembledSystem;
use super::sparse::norm2;
use crate::{Error, Result};

/// Relative algebraic residual every solve must reach.
pub const RESIDUAL_TOL: f64 = 1e-8;
const REFINEMENT_STEPS: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Full nodal field, interleaved components, zero on Dirichlet dofs.
    pub u: Vec<C>,
    pub residual_norm: f64,
    pub omega: f64,
}

/// Sparse LU of `S` on free dofs.
pub struct Factorization<'a> {
    pub system: &'a AssembledSystem,
    lu: Lu<usize, C>,
}

impl AssembledSystem {
    pub fn factorize(&self) -> Result<Factorization<'_>> {
        let n = self.n_free();
        let t: Vec<Triplet<usize, usize, C>> =
            self.system_triplets().into_iter().map(|(i, j, v)| Triplet::new(i, j, v)).collect();
        let s = SparseColMat::<usize, C>::try_new_from_triplets(n, n, &t)
            .map_err(|e| Error::Solver { msg: format!("matrix creation failed: {e:?}"), residual: f64::NAN })?;
        let lu =
            s.sp_lu().map_err(|e| Error::Solver { msg: format!("factorization failed: {e:?}"), residual: f64::NAN })?;
        Ok(Factorization { system: self, lu })
    }
}

fn to_mat(b: &[C]) -> Mat<C> {
    Mat::from_fn(b.len(), 1, |i, _| b[i])
}

fn from_mat(m: &Mat<C>) -> Vec<C> {
    (0..m.nrows()).map(|i| m[(i, 0)]).collect()
}

impl Factorization<'_> {
    fn raw(&self, b: &[C], adjoint: bool) -> Vec<C> {
        let m = to_mat(b);
        // S is complex symmetric, so S^H = conj(S).
        from_mat(&if adjoint { self.lu.solve_conjugate(&m) } else { self.lu.solve(&m) })
    }

    fn residual(&self, x: &[C], b: &[C], adjoint: bool) -> Vec<C> {
        let sx = if adjoint {
            let xc: Vec<C> = x.iter().map(|z| z.conj()).collect();
            self.system.apply(&xc).into_iter().map(|z| z.conj()).collect::<Vec<_>>()
        } else {
            self.system.apply(x)
        };
        b.iter().zip(sx).map(|(b, s)| b - s).collect()
    }

    fn solve_checked(&self, b: &[C], adjoint: bool) -> Result<(Vec<C>, f64)> {
        let bn = norm2(b);
        if bn == 0.0 {
            return Ok((vec![C::new(0.0, 0.0); b.len()], 0.0));
        }
        let mut x = self.raw(b, adjoint);
        let mut rel = norm2(&self.residual(&x, b, adjoint)) / bn;
        // iterative refinement fallback
        for _ in 0..REFINEMENT_STEPS {
            if rel <= RESIDUAL_TOL {
                break;
            }
            let dx = self.raw(&self.residual(&x, b, adjoint), adjoint);
            for (x, d) in x.iter_mut().zip(dx) {
                *x += d;
            }
            rel = norm2(&self.residual(&x, b, adjoint)) / bn;
        }
        if !(rel <= RESIDUAL_TOL) {
            return Err(Error::Solver { msg: "residual above tolerance after refinement".into(), residual: rel });
        }
        Ok((x, rel))
    }

    /// `S⁻¹ b` on free dofs with its relative residual.
    pub fn solve(&self, b: &[C]) -> Result<(Vec<C>, f64)> {
        self.solve_checked(b, false)
    }

    /// `S^{-H} b` on free dofs.
    pub fn solve_adjoint(&self, b: &[C]) -> Result<(Vec<C>, f64)> {
        self.solve_checked(b, true)
    }
}

/// Solve `S u = M f` for a full nodal load field `f`.
pub fn solve(system: &AssembledSystem, f: &[C]) -> Result<SolveResult> {
    if f.len() != system.free_map.len() || f.iter().any(|z| !z.is_finite()) {
        return Err(Error::Solver { msg: "load must be finite with one entry per dof".into(), residual: f64::NAN });
    }
    solve_rhs(system, &system.load(f))
}

/// Solve `S u = b` for free-dof right-hand side `b`.
pub fn solve_rhs(system: &AssembledSystem, b: &[C]) -> Result<SolveResult> {
    let (u, residual_norm) = system.factorize()?.solve(b)?;
    Ok(SolveResult { u: system.extend(&u), residual_norm, omega: system.omega })
}
