use boundent::cost_bound::{
    ec_lower_bound, entropy_floor_check, induction_inequality_check, run_theorem1_pipeline,
    shannon_entropy_bits,
};
use boundent::ToleranceConfig;
use proptest::prelude::*;

#[test]
fn induction_identity_is_beta_independent_for_one_copy() {
    let cfg = ToleranceConfig::default();
    for beta in [0.1, 0.5, 0.9, 0.985, 0.999] {
        let check = induction_inequality_check(1, beta, &cfg).unwrap();
        assert!(check.pass, "{check:?}");
        assert!(check.identity_residual <= 1e-9);
    }
}

#[test]
fn induction_two_copies_at_arbitrary_beta() {
    let cfg = ToleranceConfig::default();
    let check = induction_inequality_check(2, 0.6, &cfg).unwrap();
    assert!(check.pass, "{check:?}");
    assert!(check.min_eig >= -1e-10);
    assert!(check.identity_residual <= 1e-9);
}

#[test]
fn pipeline_is_deterministic_with_one_restart() {
    let cfg = ToleranceConfig {
        restarts_n1: 1,
        restarts_n2: 1,
        skip_n2: true,
        seed: 17,
        ..ToleranceConfig::default()
    };
    let a = run_theorem1_pipeline(&cfg).unwrap();
    let b = run_theorem1_pipeline(&cfg).unwrap();
    assert_eq!(a, b);
    assert!(a.certificate_ok);
    assert!(a.ec_lower_bound_bits > 0.0);
    assert!(a.skipped.iter().any(|s| s.starts_with("induction N=2")));
}

#[test]
fn pipeline_reports_positive_bound_on_default_restarts() {
    let cfg = ToleranceConfig {
        skip_n2: true,
        ..ToleranceConfig::default()
    };
    let r = run_theorem1_pipeline(&cfg).unwrap();
    assert!(r.certificate_ok && r.induction_ok && r.alpha1_ok && r.multicopy_ok, "{r:?}");
    assert!(r.ec_lower_bound_bits > 0.0);
    assert!((r.beta - (1.0 + r.alpha1_hat) / 2.0).abs() <= 1e-15);
    assert!((r.ec_lower_bound_bits + r.beta.log2()).abs() <= 1e-12);
    assert!(r.alpha1_hat < r.beta && r.beta < 1.0);
}

proptest! {
    #[test]
    fn beta_sits_between_estimate_and_one(alpha in 0.0f64..0.999_999) {
        let b = ec_lower_bound(alpha).unwrap();
        prop_assert!(b.beta > alpha && b.beta < 1.0);
        prop_assert!(b.ec_lower_bound_bits > 0.0);
    }

    #[test]
    fn bound_strictly_decreases(mut xs in proptest::collection::vec(1e-6f64..0.999_999, 2..20)) {
        xs.sort_by(|a, b| a.total_cmp(b));
        xs.dedup();
        let bounds: Vec<f64> = xs.iter().map(|&a| ec_lower_bound(a).unwrap().ec_lower_bound_bits).collect();
        prop_assert!(bounds.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn entropy_floor_holds(raw in proptest::collection::vec(0.0f64..1.0, 1..12), alpha in 0.05f64..=1.0) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-6);
        let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let renorm: f64 = p.iter().sum();
        prop_assume!((renorm - 1.0).abs() <= 1e-10);
        prop_assert!(entropy_floor_check(&p, alpha).unwrap());
        // Analytic floor H ≥ −log₂(max p).
        let largest = p.iter().copied().fold(0.0, f64::max);
        prop_assert!(shannon_entropy_bits(&p) >= -largest.log2() - 1e-9);
    }
}
