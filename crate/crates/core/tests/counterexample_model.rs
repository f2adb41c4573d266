use orliczlab_core::counterexample::{build_counterexample, Binding, CounterexampleConfig};
use orliczlab_core::{Error, Gauge, OrliczFunction};
use std::time::Instant;

fn quadratic() -> OrliczFunction {
    OrliczFunction::new(Gauge::Power { p: 2.0 }).unwrap()
}

#[test]
fn depth_five_quadratic_plane() {
    let start = Instant::now();
    let m = build_counterexample(&quadratic(), 2, 5, &CounterexampleConfig::default()).unwrap();
    for lv in &m.levels {
        eprintln!("{lv:?}");
    }
    assert_eq!(m.levels[0].binding, Binding::Energy);
    for r in m.check_invariants() {
        assert!(r.passed(), "{r:?}");
    }
    for p in 2..=4 {
        let osc = m.check_oscillation(p);
        assert!(osc.passed(), "{osc:?}");
        assert!(osc.lhs <= 0.5f64.powi(p as i32 + 2));
        for r in m.check_diameter(p) {
            assert!(r.passed(), "{r:?}");
        }
    }
    let energy = m.energy_budget();
    for r in &energy {
        assert!(r.passed(), "{r:?}");
    }
    let graph = energy.last().unwrap();
    assert!(graph.lhs <= 5.0);
    for r in m.hausdorff_lower(5) {
        assert!(r.passed(), "{r:?}");
        if r.check == "hausdorff lower" {
            assert!(r.lhs >= 2f64.powi(-10));
        }
    }
    assert!(start.elapsed().as_secs_f64() < 300.0);
}

#[test]
fn deeper_radii_shrink_doubly_exponentially() {
    let m = build_counterexample(&quadratic(), 2, 5, &CounterexampleConfig::default()).unwrap();
    let lr: Vec<f64> = m.levels.iter().map(|l| l.ln_r).collect();
    for w in lr.windows(2) {
        assert!(w[1] < w[0]);
    }
    assert!(lr[4] < -100.0, "{lr:?}");
}

#[test]
fn infeasible_depth_reports_the_last_feasible_level() {
    let cfg = CounterexampleConfig {
        log_floor: -200.0,
        ..CounterexampleConfig::default()
    };
    match build_counterexample(&quadratic(), 2, 12, &cfg) {
        Err(Error::Depth {
            requested,
            max_feasible,
        }) => {
            assert_eq!(requested, 12);
            assert!(max_feasible < 12);
        }
        other => panic!("{other:?}"),
    }
}
