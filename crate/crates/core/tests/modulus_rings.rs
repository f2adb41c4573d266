use orliczlab_core::distortion::ModelMap;
use orliczlab_core::modulus::{
    grid_modulus_2d, hesse_ziemer_check, log_growth_fit, ring_upper_bound, spheres_lower_bound,
    Family, GridConfig, RingDomain,
};
use orliczlab_core::weight::Profile;
use orliczlab_core::RadialWeight;
use proptest::prelude::*;
use std::f64::consts::{E, PI};
use std::time::Instant;

#[test]
fn planar_unit_ring_grid_matches_closed_forms() {
    let start = Instant::now();
    let ring = RingDomain::new(1.0, E, 2).unwrap();
    let cfg = GridConfig::default();
    let join = grid_modulus_2d(&ring, Family::Curves, &cfg).unwrap();
    let sep = grid_modulus_2d(&ring, Family::Spheres, &cfg).unwrap();
    assert!(join.certificate.passed(), "{:?}", join.certificate);
    assert!(sep.certificate.passed(), "{:?}", sep.certificate);
    assert!(
        (join.value / (2.0 * PI) - 1.0).abs() < 0.02,
        "{}",
        join.value
    );
    assert!((sep.value * 2.0 * PI - 1.0).abs() < 0.02, "{}", sep.value);
    assert!((join.value * sep.value - 1.0).abs() < 0.05);

    let w = RadialWeight::constant(2, 1.0);
    let up = ring_upper_bound(&w, &ring).unwrap();
    assert!((up.certificate.lhs - 1.0).abs() < 1e-9);
    let lo = spheres_lower_bound(&w, 1.0, E).unwrap();
    assert!(lo.certificate.lhs >= 1.0 - 1e-6);
    assert!((lo.value / sep.value - 1.0).abs() < 0.02);
    assert!(start.elapsed().as_secs_f64() < 120.0);
}

#[test]
fn refinement_gaps_shrink() {
    let ring = RingDomain::new(1.0, E, 2).unwrap();
    for family in [Family::Curves, Family::Spheres] {
        let v: Vec<f64> = [32usize, 64, 128, 256]
            .iter()
            .map(|n| {
                grid_modulus_2d(
                    &ring,
                    family,
                    &GridConfig {
                        resolution: *n,
                        ..GridConfig::default()
                    },
                )
                .unwrap()
                .value
            })
            .collect();
        for w in v.windows(3) {
            assert!(
                (w[2] - w[1]).abs() * 2.0 <= (w[1] - w[0]).abs(),
                "{family:?}: {v:?}"
            );
        }
    }
}

#[test]
fn identity_reciprocity_in_three_and_two_dimensions() {
    let r3 = hesse_ziemer_check(
        &RingDomain::new(1.0, E, 3).unwrap(),
        &ModelMap::Identity { n: 3 },
        None,
    )
    .unwrap();
    assert!((r3.joining - 4.0 * PI).abs() < 1e-9);
    assert!((r3.separating - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-12);
    let cfg = GridConfig {
        resolution: 128,
        ..GridConfig::default()
    };
    let r2 = hesse_ziemer_check(
        &RingDomain::new(1.0, E, 2).unwrap(),
        &ModelMap::Identity { n: 2 },
        Some(&cfg),
    )
    .unwrap();
    for r in r3.reports.iter().chain(&r2.reports) {
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn sphere_modulus_grows_logarithmically() {
    let w = RadialWeight::constant(3, 1.0);
    let (c, res) = log_growth_fit(&w, 1.0, &[2.0, 10.0, 100.0, 1e4]).unwrap();
    assert!((c - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-10 && res < 1e-10);
}

#[test]
fn power_weight_ring_bound_against_direct_quadrature() {
    // q(r) = r^a, n = 3: I = ∫ r^{-1-a/2} dr = (2/a)(r1^{-a/2} - r2^{-a/2})
    let a = 1.0;
    let w = RadialWeight::new(3, Profile::Power { c: 1.0, a }).unwrap();
    let ring = RingDomain::new(0.5, 3.0, 3).unwrap();
    let i = 2.0 / a * (0.5f64.powf(-a / 2.0) - 3.0f64.powf(-a / 2.0));
    let up = ring_upper_bound(&w, &ring).unwrap();
    assert!((up.value / (4.0 * PI / (i * i)) - 1.0).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn larger_rings_have_smaller_joining_modulus(r2 in 1.5f64..4.0, grow in 1.05f64..2.0) {
        let cfg = GridConfig { resolution: 24, ..GridConfig::default() };
        let a = grid_modulus_2d(&RingDomain::new(1.0, r2, 2).unwrap(), Family::Curves, &cfg).unwrap().value;
        let b = grid_modulus_2d(&RingDomain::new(1.0, r2 * grow, 2).unwrap(), Family::Curves, &cfg).unwrap().value;
        prop_assert!(b <= a * (1.0 + 1e-9));
    }

    #[test]
    fn sector_moduli_are_subadditive(split in 0.3f64..6.0) {
        let ring = RingDomain::new(1.0, E, 2).unwrap();
        let base = GridConfig { resolution: 32, ..GridConfig::default() };
        let whole = grid_modulus_2d(&ring, Family::Curves, &base).unwrap().value;
        let a = grid_modulus_2d(&ring, Family::Curves, &GridConfig { sector: (0.0, split), ..base }).unwrap().value;
        let b = grid_modulus_2d(&ring, Family::Curves, &GridConfig { sector: (split, 2.0 * PI), ..base }).unwrap().value;
        prop_assert!(whole <= (a + b) * (1.0 + 1e-9));
    }

    #[test]
    fn extremal_certificates_hold(a in -1.0f64..1.0, amp in -1.0f64..1.0) {
        let w = RadialWeight::new(3, Profile::Power { c: 1.0, a }).unwrap()
            .with_full(orliczlab_core::weight::FullWeight::Dipole { amplitude: amp * 0.9 }).unwrap();
        let s = spheres_lower_bound(&w, 0.2, 2.0).unwrap();
        prop_assert!(s.certificate.margin >= -1e-6);
        let radial = RadialWeight::new(3, Profile::Power { c: 1.0, a }).unwrap();
        let r = ring_upper_bound(&radial, &RingDomain::new(0.2, 2.0, 3).unwrap()).unwrap();
        prop_assert!(r.certificate.passed());
    }
}

#[test]
fn cubic_modulus_of_radial_curves() {
    // M_p = 2π (∫_1^R r^{-1/(p-1)} dr)^{1-p}; p = 3: ∫ r^{-1/2} = 2(√R - 1)
    let ring = RingDomain::new(1.0, 4.0, 2).unwrap();
    let cfg = GridConfig {
        resolution: 128,
        p: 3.0,
        ..GridConfig::default()
    };
    let m = grid_modulus_2d(&ring, Family::Curves, &cfg).unwrap();
    assert!(m.certificate.passed(), "{:?}", m.certificate);
    let exact = 2.0 * PI * (2.0f64 * (2.0 - 1.0)).powf(-2.0);
    assert!((m.value / exact - 1.0).abs() < 0.02, "{} {exact}", m.value);
}
