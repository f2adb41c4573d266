use orliczlab_core::distortion::{
    chordal, distortion_bound, fmo_bound, holder_check, kf_numeric, ChordalGap, ModelMap,
};
use orliczlab_core::numeric::unit_sphere_area;
use orliczlab_core::weight::Profile;
use orliczlab_core::{ConstantsConfig, RadialWeight};
use proptest::prelude::*;

#[test]
fn contracting_stretch_in_three_dimensions() {
    let r = holder_check(0.5, 3).unwrap();
    for rep in &r.reports {
        assert!(rep.passed(), "{rep:?}");
    }
    assert!((r.k_f - 2.0).abs() < 1e-6);
    assert!((r.fitted_exponent - 0.5).abs() < 1e-6);
    assert!((r.bound_exponent - r.fitted_exponent).abs() < 1e-6);
    // ω₂·K^{n-1} = 4π·4
    let c = unit_sphere_area(3) * 4.0;
    assert!((r.hypothesis_constant / c - 1.0).abs() < 1e-6);
    assert!((c - 16.0 * std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn bound_decays_with_constant_distortion() {
    let w = RadialWeight::constant(3, 2.0);
    let g = ChordalGap::new(1.0).unwrap();
    let cfg = ConstantsConfig::default();
    let at = |d: f64| {
        distortion_bound(&w, g, &[0.0; 3], 0.5, &[d, 0.0, 0.0], &cfg)
            .unwrap()
            .average_form
    };
    // exp(-(1/K) log(ε0/d)) = (d/ε0)^{1/2}
    for d in [1e-2, 1e-4, 1e-8] {
        assert!((at(d) / (d / 0.5f64).sqrt() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn fmo_bound_shape() {
    let g = ChordalGap::new(0.5).unwrap();
    let cfg = ConstantsConfig::default();
    let x = [0.01, 0.0];
    let b1 = fmo_bound(g, 0.1, 1.0, &[0.0, 0.0], &x, &cfg).unwrap();
    let b2 = fmo_bound(g, 0.1, 2.0, &[0.0, 0.0], &x, &cfg).unwrap();
    assert!(b2 < b1);
    assert!(fmo_bound(g, 0.1, 1.0, &[0.0, 0.0], &[1.5, 0.0], &cfg).is_err());
    assert!(ChordalGap::new(1.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stretch_matches_closed_form(alpha in 0.2f64..4.0, r in 0.1f64..10.0, th in 0.0f64..std::f64::consts::TAU, ph in 0.1f64..3.0) {
        let map = ModelMap::stretch(alpha, 3).unwrap();
        let x = [r * ph.sin() * th.cos(), r * ph.sin() * th.sin(), r * ph.cos()];
        let k = kf_numeric(&map, &x, 1e-6).unwrap();
        prop_assert!((k - map.kf_closed().unwrap()).abs() < 1e-6 * map.kf_closed().unwrap().max(1.0));
    }

    #[test]
    fn stretch_and_inverse_compose_to_identity(alpha in 0.2f64..4.0, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        prop_assume!(x.hypot(y) > 0.1);
        let map = ModelMap::Composed { maps: vec![ModelMap::stretch(alpha, 2).unwrap(), ModelMap::stretch(1.0 / alpha, 2).unwrap()] };
        let k = kf_numeric(&map, &[x, y], 1e-6).unwrap();
        prop_assert!((k - 1.0).abs() < 1e-6);
    }

    #[test]
    fn chordal_metric_is_bounded(a in prop::array::uniform3(-1e3f64..1e3), b in prop::array::uniform3(-1e3f64..1e3)) {
        prop_assert!(chordal(Some(&a), Some(&b)) <= 1.0);
        let n2: f64 = a.iter().map(|v| v * v).sum();
        prop_assert_eq!(chordal(Some(&a), None), 1.0 / (1.0 + n2).sqrt());
    }

    #[test]
    fn two_bound_forms_coincide(s in 0.0f64..2.0, d in -8.0f64..-1.0) {
        let w = RadialWeight::new(3, Profile::LogPower { c: 1.0, s }).unwrap();
        let b = distortion_bound(&w, ChordalGap::new(1.0).unwrap(), &[0.0; 3], 0.5, &[10f64.powf(d), 0.0, 0.0], &ConstantsConfig::default()).unwrap();
        prop_assert!((b.average_form - b.norm_form).abs() <= 1e-9 * b.average_form.max(1e-300));
    }
}
