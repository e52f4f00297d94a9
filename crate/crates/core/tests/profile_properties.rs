//! Cross-module invariants of the profile decision.

use proptest::prelude::*;

use shockprof::dissipation::{b_total, DissipationParams};
use shockprof::dynamics::{
    classify_rest_point, find_profile, find_profile_in, Convention, IntegratorControls,
    RestPointKind, VerdictKind,
};
use shockprof::hugoniot::shock_states;
use shockprof::sweep::{critical_q, sweep_q, sweep_q_serial, sweep_to_csv};

fn params(eta: f64, mu: f64, nu: f64) -> DissipationParams {
    DissipationParams::new(eta, mu, nu).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conventions_agree(q in 0.755..0.99f64, mu in 2.0..12.0f64, nu in 1.0..40.0f64) {
        let p = params(1.0, mu, nu);
        let c = IntegratorControls::default();
        let a = find_profile_in(q, &p, &c, Convention::Contravariant).unwrap();
        let b = find_profile_in(q, &p, &c, Convention::Covariant).unwrap();
        prop_assert_eq!(a.kind(), b.kind());
        prop_assert_eq!(
            a.diagnostics.class_minus.map(|c| c.kind),
            b.diagnostics.class_minus.map(|c| c.kind)
        );
    }

    #[test]
    fn existing_orbits_are_well_formed(q in 0.755..0.80f64) {
        let p = DissipationParams::default();
        let c = IntegratorControls::default();
        let v = find_profile(q, &p, &c).unwrap();
        prop_assert_eq!(v.kind(), VerdictKind::Exists);
        let orbit = v.orbit().unwrap();
        let pair = shock_states(q).unwrap();
        // flux residual at the endpoint
        let f = orbit.end().profile_rhs(&pair.q);
        prop_assert!(f[0].hypot(f[1]) < 10.0 * c.convergence_ball);
        // det B keeps the launch sign
        for s in &orbit.samples {
            prop_assert_eq!(b_total(&s.state, &p).det().signum(), orbit.det_b_sign);
        }
        // time runs from the upstream to the downstream state
        prop_assert!(orbit.start().v() > orbit.end().v());
    }

    #[test]
    fn transition_matches_upstream_type(mu in 1.5..12.0f64, nu_factor in 1.05..10.0f64, q in 0.751..0.999f64) {
        let p0 = params(1.0, mu, 1.0);
        let p = p0.with_nu(p0.nu_star().unwrap() * nu_factor).unwrap();
        let qc = critical_q(&p, 1e-9).unwrap();
        prop_assume!((q - qc).abs() > 1e-6);
        let kind = classify_rest_point(&shock_states(q).unwrap().minus, &p).unwrap().kind;
        if q < qc {
            prop_assert_eq!(kind, RestPointKind::Saddle);
        } else {
            prop_assert!(kind.is_attractor());
        }
    }
}

#[test]
fn launch_offset_halving_keeps_verdicts() {
    let base = IntegratorControls::default();
    let half = IntegratorControls {
        launch_offset: base.launch_offset / 2.0,
        ..base
    };
    for p in [
        params(1.0, 7.0, 20.0),
        params(1.0, 7.0, 3.15),
        params(1.0, 2.0, 3.6),
    ] {
        for q in [0.76, 0.775, 0.79, 0.8, 0.85, 0.9, 0.95, 0.99] {
            let a = find_profile(q, &p, &base).unwrap().kind();
            let b = find_profile(q, &p, &half).unwrap().kind();
            assert_eq!(a, b, "{p:?} q = {q}");
        }
    }
}

#[test]
fn sweeps_are_reproducible() {
    let p = DissipationParams::default();
    let c = IntegratorControls::default();
    let grid: Vec<f64> = (0..40).map(|i| 0.752 + 0.006 * i as f64).collect();
    let a = sweep_to_csv(&sweep_q(&p, &grid, &c));
    let b = sweep_to_csv(&sweep_q(&p, &grid, &c));
    let s = sweep_to_csv(&sweep_q_serial(&p, &grid, &c));
    assert_eq!(a, b);
    assert_eq!(a, s);
}
