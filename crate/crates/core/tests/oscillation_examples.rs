use orliczlab_core::oscillation::{
    build_bump_sum, build_disc_sum, dyadic_scales, fmo_at_point, FieldKind, FmoEvidence,
    OscillationField, PolarRule,
};
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn bump_sum_with_half_exponent() {
    let (_, rep) = build_bump_sum(0.5).unwrap();
    for r in &rep.reports {
        assert!(r.passed(), "{r:?}");
    }
    let shrinking = rep
        .reports
        .iter()
        .find(|r| r.check == "shrinking disc mean")
        .unwrap();
    assert!(shrinking.margin >= -1e-6);
    // k = 2 and k = 3 carry the same L^{1.5} mass
    let (a, b) = (rep.per_component[0], rep.per_component[1]);
    assert!((a / b - 1.0).abs() < 1e-6, "{a} {b}");
}

#[test]
fn disc_sum_with_quadratic_exponent() {
    let (u, rep) = build_disc_sum(2.0).unwrap();
    for r in &rep.reports {
        assert!(r.passed(), "{r:?}");
    }
    for v in &rep.per_component {
        assert!((v - PI).abs() < 1e-9);
    }
    for (m, s) in rep.partial_sums.iter().enumerate() {
        assert!((s - PI * (m + 1) as f64).abs() < 1e-9);
    }
    // FMO at the origin along dyadic scales
    let res = fmo_at_point(
        &u,
        [0.0, 0.0],
        &dyadic_scales(0.5, 8),
        None,
        &PolarRule::default(),
    )
    .unwrap();
    assert_eq!(res.evidence, FmoEvidence::EvidenceFor);
}

#[test]
fn log_recip_is_fmo_with_divergent_means() {
    let u = OscillationField::new(FieldKind::LogRecip);
    let res = fmo_at_point(
        &u,
        [0.0, 0.0],
        &dyadic_scales(0.5, 10),
        None,
        &PolarRule::default(),
    )
    .unwrap();
    assert_eq!(res.evidence, FmoEvidence::EvidenceFor);
    assert!(res.means.windows(2).all(|w| w[1] > w[0]));
    assert!(res.max_oscillation < 0.4);
    for r in &res.reports {
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn inverse_power_grows_like_the_closed_form() {
    // u = 1/|z| on D(0, ε): mean 2/ε, oscillation 1/ε
    let u = OscillationField::new(FieldKind::InversePower { a: 1.0 });
    let eps = dyadic_scales(0.5, 8);
    let res = fmo_at_point(&u, [0.0, 0.0], &eps, None, &PolarRule::default()).unwrap();
    assert_eq!(res.evidence, FmoEvidence::EvidenceAgainst);
    for (e, o) in eps.iter().zip(&res.oscillations) {
        // with s = r/ε: (1/ε)·2∫_0^1 |1/s - 2| s ds = (1/ε)(1/2 + 1/2)
        let exact = 1.0 / e;
        assert!((o / exact - 1.0).abs() < 1e-3, "{e}: {o} vs {exact}");
    }
    assert!((res.trend - 1.0).abs() < 1e-3);
}

#[test]
fn inverse_square_is_not_integrable() {
    let u = OscillationField::new(FieldKind::InversePower { a: 2.0 });
    let res = fmo_at_point(
        &u,
        [0.0, 0.0],
        &dyadic_scales(0.5, 8),
        None,
        &PolarRule::default(),
    )
    .unwrap();
    assert_eq!(res.evidence, FmoEvidence::NotFmoEvidence);
    assert!(!res.reports[0].passed());
}

#[test]
fn continuous_field_has_vanishing_oscillation() {
    let u = OscillationField::new(FieldKind::InversePower { a: -1.0 });
    let res = fmo_at_point(
        &u,
        [0.0, 0.0],
        &dyadic_scales(0.5, 8),
        None,
        &PolarRule::new(64, 64),
    )
    .unwrap();
    assert!(res.oscillations.windows(2).all(|w| w[1] < w[0]));
    assert!(*res.oscillations.last().unwrap() < 1e-2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ball_mean_is_the_best_centering_up_to_two(x in -0.5f64..0.5, y in -0.5f64..0.5, r in 0.01f64..0.5, c in -3.0f64..3.0) {
        let rule = PolarRule::new(48, 48);
        for kind in [FieldKind::LogRecip, FieldKind::HalfPlane, FieldKind::InversePower { a: 0.5 }] {
            let u = OscillationField::new(kind);
            let osc = u.mean_oscillation([x, y], r, &rule).unwrap();
            let dev = u.deviation_from([x, y], r, c, &rule).unwrap();
            prop_assert!(osc <= 2.0 * dev + 1e-12);
        }
    }

    #[test]
    fn offset_invariance(x in -0.5f64..0.5, y in -0.5f64..0.5, r in 0.01f64..0.5, c in -100.0f64..100.0) {
        let rule = PolarRule::new(32, 32);
        let u = OscillationField::new(FieldKind::LogRecip);
        let a = u.mean_oscillation([x, y], r, &rule).unwrap();
        let b = u.clone().with_offset(c).mean_oscillation([x, y], r, &rule).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + c.abs()));
    }
}

#[test]
fn bump_sum_means_stay_nonnegative_at_every_scale() {
    // spikes of height 2^{2k²} on tiny discs must not cancel the zero background
    let (u, _) = build_bump_sum(0.5).unwrap();
    let res = fmo_at_point(
        &u,
        [0.0, 0.0],
        &dyadic_scales(0.5, 8),
        None,
        &PolarRule::default(),
    )
    .unwrap();
    for (m, o) in res.means.iter().zip(&res.oscillations) {
        assert!(*m >= 0.0 && *o <= 2.0 * m + 1e-15, "{m} {o}");
    }
    for r in &res.reports {
        assert!(r.passed(), "{r:?}");
    }
}
