//! Closed-form stability bounds, all normalized to `ω²‖u‖_ρ ≤ C‖f‖_ρ`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{DimensionlessGroups, MultiplierSpec};
use crate::{Error, Result};

/// Constants of the general theory that are not computed here.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GenericConstants {
    pub c_reg: Option<f64>,
    pub c_ell: Option<f64>,
    pub korn_k: Option<f64>,
    pub korn_k0: Option<f64>,
    /// Prefactor `C` of the general-Robin bound `C(1 + κ²)`.
    pub c_general: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_name: String,
    pub bound_value: f64,
    pub inputs: BTreeMap<String, f64>,
    pub symbolic: bool,
    pub measured: Option<f64>,
    pub slack: Option<f64>,
}

impl BoundReport {
    fn new(name: &str, value: f64, inputs: &[(&str, f64)]) -> Self {
        Self {
            bound_name: name.to_string(),
            bound_value: value,
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            symbolic: false,
            measured: None,
            slack: None,
        }
    }

    /// Attaches a measured value; `slack = bound − measured`.
    pub fn with_measured(mut self, measured: f64) -> Self {
        self.measured = Some(measured);
        self.slack = Some(self.bound_value - measured);
        self
    }

    pub fn holds(&self) -> bool {
        self.slack.map_or(true, |s| s >= 0.0)
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("kappa = {kappa} must be nonnegative")));
    }
    Ok(())
}

/// Bound on `a·x` for `x ≥ 0` with `a x² ≤ c + b x`.
pub fn quadratic_root_bound(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::Domain(format!("need a, b, c > 0, got ({a}, {b}, {c})")));
    }
    Ok((a * c).sqrt() + b)
}

/// Which `κ^{1/6}` coefficient to use in the simple-Robin bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SixthRootTerm {
    /// `√χ`, general statement.
    SqrtChi,
    /// `1/√α_min`, star-shaped obstacle specialization.
    InvSqrtAlphaMin,
}

/// Terms of the simple-Robin bracket, before the `M/γ` normalization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimpleRobinTerms {
    pub constant: f64,
    pub sixth: f64,
    pub third: f64,
    pub two_thirds: f64,
    pub linear: f64,
}

impl SimpleRobinTerms {
    pub fn new(groups: &DimensionlessGroups, mult: &MultiplierSpec, d: usize, sixth: SixthRootTerm) -> Result<Self> {
        if !(mult.gamma > 0.0) || !(mult.small_m > 0.0) {
            return Err(Error::Inadmissible(format!(
                "need gamma > 0 and m > 0, got gamma = {}, m = {}",
                mult.gamma, mult.small_m
            )));
        }
        let (big_m, ratio) = (mult.big_m, mult.big_m / mult.small_m);
        let c_rob = groups.c_rob;
        Ok(Self {
            constant: (d as f64 - 2.0 + mult.epsilon) / (2.0 * big_m) + groups.zeta / 2.0,
            sixth: match sixth {
                SixthRootTerm::SqrtChi => groups.chi.sqrt(),
                SixthRootTerm::InvSqrtAlphaMin => 1.0 / groups.alpha_min.sqrt(),
            },
            third: ratio / 4.0,
            two_thirds: 2.5 + ratio / 4.0 * c_rob,
            linear: 1.0 + 1.0 / (2.0 * groups.alpha_min) + ratio / 16.0 * c_rob * c_rob,
        })
    }

    pub fn bracket(&self, kappa: f64) -> f64 {
        self.constant
            + self.sixth * kappa.powf(1.0 / 6.0)
            + self.third * kappa.cbrt()
            + self.two_thirds * kappa.powf(2.0 / 3.0)
            + self.linear * kappa
    }
}

fn simple_robin(
    groups: &DimensionlessGroups,
    mult: &MultiplierSpec,
    d: usize,
    sixth: SixthRootTerm,
    name: &str,
) -> Result<BoundReport> {
    check_kappa(groups.kappa_s)?;
    let t = SimpleRobinTerms::new(groups, mult, d, sixth)?;
    let value = mult.big_m / mult.gamma * t.bracket(groups.kappa_s);
    Ok(BoundReport::new(
        name,
        value,
        &[
            ("kappa_s", groups.kappa_s),
            ("d", d as f64),
            ("M", mult.big_m),
            ("m", mult.small_m),
            ("gamma", mult.gamma),
            ("epsilon", mult.epsilon),
            ("zeta", groups.zeta),
            ("chi", groups.chi),
            ("alpha_min", groups.alpha_min),
            ("c_rob", groups.c_rob),
        ],
    ))
}

/// Simple-Robin stability constant with the `√χ κ^{1/6}` term.
pub fn stability_simple_robin(groups: &DimensionlessGroups, mult: &MultiplierSpec, d: usize) -> Result<BoundReport> {
    simple_robin(groups, mult, d, SixthRootTerm::SqrtChi, "simple_robin")
}

/// Same bracket with the `κ^{1/6}/√α_min` term of the obstacle specialization.
pub fn stability_simple_robin_star(
    groups: &DimensionlessGroups,
    mult: &MultiplierSpec,
    d: usize,
) -> Result<BoundReport> {
    simple_robin(groups, mult, d, SixthRootTerm::InvSqrtAlphaMin, "simple_robin_star")
}

/// Ideal-impedance obstacle bound: `(full, simplified)`.
pub fn bound_obstacle_ideal(kappa: f64, d: usize) -> Result<(f64, f64)> {
    check_kappa(kappa)?;
    let full = (d as f64 / 2.0 - 1.0)
        + kappa.powf(1.0 / 6.0)
        + kappa.cbrt() / 4.0
        + 13.0 / 4.0 * kappa.powf(2.0 / 3.0)
        + 33.0 / 16.0 * kappa;
    Ok((full, 3.0 + 5.0 * kappa))
}

/// Obstacle bound for `α_T = 1`, `α_N = √(2 + λ/μ)`.
pub fn bound_obstacle_realistic(kappa: f64, lambda_over_mu: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if !(lambda_over_mu >= 0.0 && lambda_over_mu.is_finite()) {
        return Err(Error::Domain(format!("lambda/mu = {lambda_over_mu} must be nonnegative")));
    }
    Ok(0.5
        + kappa.powf(1.0 / 6.0)
        + kappa.cbrt() / 4.0
        + (3.5 + lambda_over_mu.sqrt() / 2.0) * kappa.powf(2.0 / 3.0)
        + (2.0 + lambda_over_mu / 4.0) * kappa)
}

/// `C(1 + κ²)`; `C = 1` and `symbolic` when the prefactor is not supplied.
pub fn bound_general_robin(kappa: f64, constants: &GenericConstants) -> Result<BoundReport> {
    check_kappa(kappa)?;
    let c = constants.c_general.unwrap_or(1.0);
    let mut r = BoundReport::new("general_robin", c * (1.0 + kappa * kappa), &[("kappa_s", kappa), ("C", c)]);
    r.symbolic = constants.c_general.is_none();
    Ok(r)
}

/// Full-space bound `4 + 17κ`.
pub fn bound_fundamental(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(4.0 + 17.0 * kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MultiplierKind;

    fn groups(kappa: f64) -> DimensionlessGroups {
        DimensionlessGroups {
            kappa_s: kappa,
            alpha_t: 1.0,
            alpha_n: 1.0,
            alpha_min: 1.0,
            alpha_max: 1.0,
            beta_t: 1.0,
            beta_n: 2.0,
            chi: 2.0,
            zeta: 0.0,
            c_rob: 3.0,
            big_m: 1.0,
            small_m: 1.0,
            nu: 3f64.sqrt(),
            gamma: 1.0,
        }
    }

    #[test]
    fn quadratic_examples() {
        assert!((quadratic_root_bound(1.0, 1e-300, 4.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(quadratic_root_bound(1.0, 1.0, 1.0).unwrap(), 2.0);
        assert_eq!(quadratic_root_bound(4.0, 2.0, 9.0).unwrap(), 8.0);
        assert!(quadratic_root_bound(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn simple_robin_reference() {
        let h = MultiplierSpec::identity(3);
        let r = stability_simple_robin(&groups(1.0), &h, 3).unwrap();
        assert!((r.bound_value - 7.476713562373095).abs() < 1e-13);
        let r0 = stability_simple_robin(&groups(1e-30), &h, 3).unwrap();
        assert!((r0.bound_value - 0.5).abs() < 1e-4);
        assert!(!r.symbolic);
    }

    #[test]
    fn simple_robin_m_ratio_invariance() {
        let g = groups(2.0);
        let h1 = MultiplierSpec::identity(3);
        let h2 = MultiplierSpec { big_m: 2.0, small_m: 2.0, kind: MultiplierKind::Identity, ..h1 };
        let t1 = SimpleRobinTerms::new(&g, &h1, 3, SixthRootTerm::SqrtChi).unwrap();
        let t2 = SimpleRobinTerms::new(&g, &h2, 3, SixthRootTerm::SqrtChi).unwrap();
        assert_eq!((t1.third, t1.two_thirds, t1.linear), (t2.third, t2.two_thirds, t2.linear));
    }

    #[test]
    fn simple_robin_rejects_degenerate_multiplier() {
        let h = MultiplierSpec { small_m: 0.0, ..MultiplierSpec::identity(3) };
        assert!(stability_simple_robin(&groups(1.0), &h, 3).is_err());
    }

    #[test]
    fn obstacle_ideal_examples() {
        assert_eq!(bound_obstacle_ideal(1.0, 3).unwrap(), (7.0625, 8.0));
        assert_eq!(bound_obstacle_ideal(0.0, 2).unwrap(), (0.0, 3.0));
        let (f, s) = bound_obstacle_ideal(64.0, 3).unwrap();
        assert!((f - 187.5).abs() < 1e-12);
        assert_eq!(s, 323.0);
        assert!((bound_obstacle_ideal(2.0, 2).unwrap().0 - 10.72149572967974).abs() < 1e-12);
        assert!(bound_obstacle_ideal(-1.0, 3).is_err());
    }

    #[test]
    fn star_variant_matches_obstacle_ideal() {
        let h = MultiplierSpec::identity(3);
        for k in 0..=12 {
            let kappa = 2f64.powi(k) / 16.0;
            let r = stability_simple_robin_star(&groups(kappa), &h, 3).unwrap();
            let (full, _) = bound_obstacle_ideal(kappa, 3).unwrap();
            assert!((r.bound_value - full).abs() <= 1e-13 * full, "kappa {kappa}");
        }
    }

    #[test]
    fn obstacle_realistic_examples() {
        assert!((bound_obstacle_realistic(1.0, 0.0).unwrap() - 7.25).abs() < 1e-15);
        assert!((bound_obstacle_realistic(1.0, 2.0).unwrap() - 8.457106781186548).abs() < 1e-13);
        assert_eq!(bound_obstacle_realistic(0.0, 123.0).unwrap(), 0.5);
        assert!(bound_obstacle_realistic(1.0, -1.0).is_err());
    }

    #[test]
    fn general_robin_examples() {
        let c5 = GenericConstants { c_general: Some(5.0), ..Default::default() };
        assert_eq!(bound_general_robin(0.0, &c5).unwrap().bound_value, 5.0);
        let c1 = GenericConstants { c_general: Some(1.0), ..Default::default() };
        assert_eq!(bound_general_robin(3.0, &c1).unwrap().bound_value, 10.0);
        let r = bound_general_robin(2.0, &GenericConstants::default()).unwrap();
        assert!(r.symbolic);
        assert_eq!(r.bound_value, 5.0);
    }

    #[test]
    fn fundamental_examples() {
        assert_eq!(bound_fundamental(0.0).unwrap(), 4.0);
        assert_eq!(bound_fundamental(1.0).unwrap(), 21.0);
        assert_eq!(bound_fundamental(2.0).unwrap(), 38.0);
    }

    #[test]
    fn measured_slack() {
        let r = bound_general_robin(1.0, &GenericConstants::default()).unwrap().with_measured(1.5);
        assert_eq!(r.slack, Some(0.5));
        assert!(r.holds());
    }
}
