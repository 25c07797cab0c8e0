use elastab::bounds::*;
use elastab::model::{DimensionlessGroups, MultiplierSpec};
use proptest::prelude::*;

fn sphere_groups(kappa: f64, alpha_t: f64, alpha_n: f64) -> DimensionlessGroups {
    let (lo, hi) = (alpha_t.min(alpha_n), alpha_t.max(alpha_n));
    DimensionlessGroups {
        kappa_s: kappa,
        alpha_t,
        alpha_n,
        alpha_min: lo,
        alpha_max: hi,
        beta_t: 1.0,
        beta_n: 2.0,
        chi: (1.0 / alpha_t).max(2.0 / alpha_n),
        zeta: 0.0,
        c_rob: (2.0 + (hi / lo).sqrt()) * hi.sqrt(),
        big_m: 1.0,
        small_m: 1.0,
        nu: 3f64.sqrt(),
        gamma: 1.0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn quadratic_root_dominates_positive_root(a in 1e-3f64..1e3, b in 1e-3f64..1e3, c in 1e-3f64..1e3) {
        let x = (b + (b * b + 4.0 * a * c).sqrt()) / (2.0 * a);
        let bound = quadratic_root_bound(a, b, c).unwrap();
        prop_assert!(a * x <= bound * (1.0 + 1e-14));
    }

    #[test]
    fn bounds_nondecreasing_in_kappa(k in 0.0f64..100.0, dk in 0.0f64..10.0, r in 0.0f64..1e4, d in 2usize..4) {
        let k2 = k + dk;
        let (f1, s1) = bound_obstacle_ideal(k, d).unwrap();
        let (f2, s2) = bound_obstacle_ideal(k2, d).unwrap();
        prop_assert!(f1 <= f2 && s1 <= s2);
        prop_assert!(bound_obstacle_realistic(k, r).unwrap() <= bound_obstacle_realistic(k2, r).unwrap());
        prop_assert!(bound_fundamental(k).unwrap() <= bound_fundamental(k2).unwrap());
        let c = GenericConstants::default();
        prop_assert!(bound_general_robin(k, &c).unwrap().bound_value <= bound_general_robin(k2, &c).unwrap().bound_value);
        let h = MultiplierSpec::identity(3);
        let a = stability_simple_robin(&sphere_groups(k, 1.3, 0.7), &h, 3).unwrap().bound_value;
        let b = stability_simple_robin(&sphere_groups(k2, 1.3, 0.7), &h, 3).unwrap().bound_value;
        prop_assert!(a <= b);
    }

    #[test]
    fn realistic_nondecreasing_in_ratio(k in 0.0f64..100.0, r in 0.0f64..1e4, dr in 0.0f64..1e3) {
        prop_assert!(bound_obstacle_realistic(k, r).unwrap() <= bound_obstacle_realistic(k, r + dr).unwrap());
    }

    #[test]
    fn ideal_full_below_simplified(k in 0.0f64..1e4, d in 2usize..4) {
        let (f, s) = bound_obstacle_ideal(k, d).unwrap();
        prop_assert!(f <= s);
    }
}

#[test]
fn dominance_on_dyadic_grid() {
    for d in [2, 3] {
        for k in 0..=12 {
            let kappa = 2f64.powi(k) / 16.0;
            let (f, s) = bound_obstacle_ideal(kappa, d).unwrap();
            assert!(f <= s, "d={d}, kappa={kappa}");
        }
    }
}
