use orliczlab_core::integral::{
    ball_average, calderon_condition, classify_function, condition_equivalence_report,
    inverse_tail_condition, log_integral_battery, log_integral_bound_check, verdicts_agree,
    Classification, ClassifierConfig, ConditionForm, LogIntegralConfig,
};
use orliczlab_core::{Gauge, OrliczFunction, Status};
use proptest::prelude::*;

fn gauge(g: Gauge) -> OrliczFunction {
    OrliczFunction::general(g).unwrap()
}

#[test]
fn power_gauges_split_at_k() {
    let cfg = ClassifierConfig::default();
    for k in [2usize, 3, 4] {
        let kf = k as f64;
        for p in [kf - 0.5, kf, kf + 0.5, kf + 2.0] {
            let v = calderon_condition(&gauge(Gauge::Power { p }), k, &cfg).unwrap();
            let expected = if p > kf {
                Classification::Convergent
            } else {
                Classification::Divergent
            };
            assert_eq!(v.classification, expected, "k={k} p={p}: {v:?}");
        }
    }
}

#[test]
fn convergent_power_values_match_closed_form() {
    // ∫_1^∞ t^{(1-p)/(k-1)} dt = (k-1)/(p-k)
    let cfg = ClassifierConfig::default();
    for (p, k) in [(2.5, 2usize), (5.0, 3), (6.0, 4)] {
        let v = calderon_condition(&gauge(Gauge::Power { p }), k, &cfg).unwrap();
        let exact = (k as f64 - 1.0) / (p - k as f64);
        assert!(
            (v.value_estimate / exact - 1.0).abs() < 1e-6,
            "p={p} k={k}: {} vs {exact}",
            v.value_estimate
        );
    }
}

#[test]
fn six_forms_agree_on_convex_battery() {
    let cfg = ClassifierConfig::default();
    let battery = [
        (Gauge::Power { p: 1.0 }, 1.0, Classification::Convergent),
        (Gauge::Power { p: 2.0 }, 2.0, Classification::Convergent),
        (
            Gauge::PowerLog { p: 1.0, s: 2.0 },
            1.0,
            Classification::Convergent,
        ),
        (Gauge::ExpPowerM1 { a: 1.0 }, 1.0, Classification::Divergent),
        (
            Gauge::ExpPowerM1 { a: 1.0 },
            0.5,
            Classification::Convergent,
        ),
        (Gauge::ExpPowerM1 { a: 2.0 }, 1.0, Classification::Divergent),
    ];
    for (g, p, expected) in battery {
        let phi = gauge(g.clone());
        let v = condition_equivalence_report(&phi, p, 1.0, &cfg).unwrap();
        assert_eq!(v.len(), ConditionForm::ALL.len());
        assert!(verdicts_agree(&v), "{g:?} p={p}: {v:#?}");
        assert_eq!(v[0].classification, expected, "{g:?} p={p}");
    }
}

#[test]
fn divergence_weakens_as_p_grows() {
    // once divergent at p, the condition stays divergent for larger p
    let cfg = ClassifierConfig::default();
    let phi = gauge(Gauge::ExpPowerM1 { a: 1.0 });
    let mut seen_divergent = false;
    for p in [0.5, 1.0, 2.0, 3.0] {
        let v = condition_equivalence_report(&phi, p, 1.0, &cfg).unwrap();
        let div = v[2].classification == Classification::Divergent;
        assert!(!seen_divergent || div, "p={p}");
        seen_divergent |= div;
    }
    assert!(seen_divergent);
}

#[test]
fn exp_inverse_tail_is_divergent() {
    let cfg = ClassifierConfig::default();
    let v = inverse_tail_condition(&gauge(Gauge::ExpPower { a: 1.0 }), 3.0, 3.0, &cfg).unwrap();
    assert_eq!(v.classification, Classification::Divergent);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pure_powers_classified_by_exponent(a in 0.2f64..3.0) {
        prop_assume!((a - 1.0).abs() > 0.06);
        let cfg = ClassifierConfig::default();
        let v = classify_function("power", &|t: f64| t.powf(-a), 1.0, &cfg);
        let expected = if a > 1.0 { Classification::Convergent } else { Classification::Divergent };
        prop_assert_eq!(v.classification, expected);
        prop_assert_eq!(v.tier, 0);
    }

    #[test]
    fn log_corrected_reciprocals(s in -2.0f64..3.0) {
        // ∫ dt/(t ln^s t) converges iff s > 1
        prop_assume!((s - 1.0).abs() > 0.06);
        let cfg = ClassifierConfig::default();
        let v = classify_function("log", &|t: f64| 1.0 / (t * t.ln().powf(s)), std::f64::consts::E, &cfg);
        let expected = if s > 1.0 { Classification::Convergent } else { Classification::Divergent };
        prop_assert_eq!(v.classification, expected, "{:?}", v);
    }

    #[test]
    fn partial_value_grows_with_cutoff(a in 0.5f64..2.5, c in 6.0f64..11.0) {
        let lo = ClassifierConfig { cutoff: 10f64.powf(c), ..ClassifierConfig::default() };
        let hi = ClassifierConfig { cutoff: 10f64.powf(c + 1.0), ..ClassifierConfig::default() };
        let f = |t: f64| t.powf(-a);
        let v1 = classify_function("p", &f, 1.0, &lo);
        let v2 = classify_function("p", &f, 1.0, &hi);
        prop_assert!(v2.partial_value >= v1.partial_value);
    }
}

#[test]
fn log_integral_dominates_inverse_tail_on_battery() {
    let lc = LogIntegralConfig::default();
    let battery = log_integral_battery().unwrap();
    assert_eq!(battery.len(), 5);
    for case in &battery {
        let r = log_integral_bound_check(&case.weight, &case.phi, case.p, &lc).unwrap();
        assert_eq!(r.status, Status::Pass, "{}: {r:?}", case.name);
        assert!(r.margin >= -1e-6, "{}", case.name);
    }
    // root-log weight against e^{t^2} - 1: Φ∘Q = 1/r - 1 on the plane, M = 1
    let last = &battery[4];
    let m = ball_average(&last.weight, &last.phi);
    assert!((m - 1.0).abs() < 1e-8, "{m}");
}
