//! Acceptance battery: one line per criterion, then a single assertion.

use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;
use std::time::Instant;

use orliczlab_core::counterexample::{build_counterexample, CounterexampleConfig};
use orliczlab_core::distortion::holder_check;
use orliczlab_core::extremal::{
    build_profile, verify_calderon_pair, ExtremalConfig, Normalization,
};
use orliczlab_core::integral::{
    calderon_condition, condition_equivalence_report, log_integral_battery,
    log_integral_bound_check, verdicts_agree, Classification, ClassifierConfig, LogIntegralConfig,
};
use orliczlab_core::modulus::{
    grid_modulus_2d, ring_upper_bound, spheres_lower_bound, Family, GridConfig, RingDomain,
};
use orliczlab_core::numeric::geomspace;
use orliczlab_core::oscillation::{build_bump_sum, build_disc_sum};
use orliczlab_core::{Gauge, OrliczFunction, RadialWeight};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gauge(g: Gauge) -> OrliczFunction {
    OrliczFunction::general(g).unwrap()
}

fn classifier_on_powers() -> Check {
    let cfg = ClassifierConfig::default();
    let mut worst = 0.0f64;
    for k in [2usize, 3, 4] {
        let kf = k as f64;
        for p in [kf - 0.5, kf, kf + 0.5, kf + 2.0] {
            let t = Instant::now();
            let v = calderon_condition(&gauge(Gauge::Power { p }), k, &cfg)
                .map_err(|e| e.to_string())?;
            let dt = t.elapsed().as_secs_f64();
            worst = worst.max(dt);
            let want = if p > kf {
                Classification::Convergent
            } else {
                Classification::Divergent
            };
            ensure(
                v.classification == want,
                format!("k={k} p={p}: {:?}", v.classification),
            )?;
            ensure(dt < 1.0, format!("k={k} p={p} took {dt:.3} s"))?;
        }
    }
    Ok(format!("12 cases, slowest {worst:.4} s"))
}

fn six_forms_agree() -> Check {
    let t = Instant::now();
    let cfg = ClassifierConfig::default();
    let battery = [
        (Gauge::Power { p: 1.0 }, 1.0),
        (Gauge::Power { p: 2.0 }, 2.0),
        (Gauge::PowerLog { p: 1.0, s: 2.0 }, 1.0),
        (Gauge::PowerLog { p: 2.0, s: 1.0 }, 1.0),
        (Gauge::ExpPowerM1 { a: 1.0 }, 1.0),
        (Gauge::ExpPowerM1 { a: 2.0 }, 1.0),
    ];
    let mut disagreements = 0;
    for (g, p) in battery {
        let v = condition_equivalence_report(&gauge(g), p, 1.0, &cfg).map_err(|e| e.to_string())?;
        ensure(v.len() == 6, "six forms expected")?;
        if !verdicts_agree(&v) {
            disagreements += 1;
        }
    }
    let dt = t.elapsed().as_secs_f64();
    ensure(disagreements == 0, format!("{disagreements} disagreements"))?;
    ensure(dt < 10.0, format!("took {dt:.2} s"))?;
    Ok(format!("6 gauges, 0 disagreements, {dt:.3} s"))
}

fn log_integral_bound_on_battery() -> Check {
    let lc = LogIntegralConfig::default();
    let mut min_margin = f64::INFINITY;
    let battery = log_integral_battery().map_err(|e| e.to_string())?;
    ensure(battery.len() == 5, "five pairs expected")?;
    for c in &battery {
        let r = log_integral_bound_check(&c.weight, &c.phi, c.p, &lc).map_err(|e| e.to_string())?;
        ensure(
            r.passed() && r.margin >= -1e-6,
            format!("{}: {:?} margin {}", c.name, r.status, r.margin),
        )?;
        min_margin = min_margin.min(r.margin);
    }
    Ok(format!("5 pairs, smallest margin {min_margin:.4e}"))
}

fn extremal_profile() -> Check {
    let t = Instant::now();
    for k in [2usize, 3] {
        let cfg = ExtremalConfig {
            normalization: Normalization::Rescale,
            ..ExtremalConfig::default()
        };
        let p =
            build_profile(&gauge(Gauge::Power { p: 2.0 }), k, &cfg).map_err(|e| e.to_string())?;
        let err = p.inversion_error(&geomspace(1e-8, 1e6, 400));
        ensure(err < 1e-9, format!("k={k}: inversion error {err:e}"))?;
        let pair = verify_calderon_pair(&p, 1e-8);
        ensure(
            pair.h_integral.classification == Classification::Divergent,
            format!("k={k}: h integral not divergent"),
        )?;
        ensure(
            pair.weighted_integral.classification == Classification::Convergent,
            format!("k={k}: weighted integral not convergent"),
        )?;
        let e = p.radial_energy(1.0).map_err(|e| e.to_string())?;
        ensure(e <= 1.0 + 1e-12, format!("k={k}: energy {e}"))?;
    }
    let dt = t.elapsed().as_secs_f64();
    ensure(dt < 30.0, format!("took {dt:.1} s"))?;
    Ok(format!("k=2,3 in {dt:.2} s"))
}

fn counterexample_depth_five() -> Check {
    let t = Instant::now();
    let m = build_counterexample(
        &gauge(Gauge::Power { p: 2.0 }),
        2,
        5,
        &CounterexampleConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    for r in m.check_invariants() {
        ensure(r.passed(), format!("invariant {}: {}", r.check, r.note))?;
    }
    for w in m.levels.iter() {
        ensure(
            w.ln_rho < w.ln_rho_star && w.ln_rho_star < w.ln_r,
            format!("ordering at level {}", w.l),
        )?;
    }
    for p in 2..=4usize {
        let osc = m.check_oscillation(p);
        ensure(
            osc.passed() && osc.lhs <= 0.5f64.powi(p as i32 + 2),
            format!("oscillation p={p}: {}", osc.lhs),
        )?;
        for r in m.check_diameter(p) {
            ensure(
                r.passed(),
                format!("diameter p={p}: {} vs {}", r.lhs, r.rhs),
            )?;
        }
    }
    let energy = m.energy_budget();
    for r in &energy {
        ensure(r.passed(), format!("energy {}: {}", r.check, r.note))?;
    }
    let graph = energy.last().expect("graph energy report");
    ensure(graph.lhs <= 5.0, format!("graph energy {}", graph.lhs))?;
    let haus = m.hausdorff_lower(5);
    let lower = haus
        .iter()
        .find(|r| r.check == "hausdorff lower")
        .ok_or("no hausdorff lower report")?;
    ensure(
        lower.passed() && lower.lhs >= 2f64.powi(-10),
        format!("hausdorff {}", lower.lhs),
    )?;
    let dt = t.elapsed().as_secs_f64();
    ensure(dt < 300.0, format!("took {dt:.1} s"))?;
    Ok(format!(
        "graph energy {:.4}, covering sum {:.4e}, {dt:.2} s",
        graph.lhs, lower.lhs
    ))
}

fn oscillation_examples() -> Check {
    let (_, two) = build_bump_sum(0.5).map_err(|e| e.to_string())?;
    let shrink = two
        .reports
        .iter()
        .find(|r| r.check == "shrinking disc mean")
        .ok_or("no J/I report")?;
    ensure(
        shrink.passed() && shrink.margin >= -1e-6,
        format!("J <= 16I/(3π): margin {}", shrink.margin),
    )?;
    let first = two.per_component[0];
    for (i, v) in two.per_component.iter().enumerate() {
        ensure(
            (v / first - 1.0).abs() <= 1e-6,
            format!("bump {i}: {v} vs {first}"),
        )?;
    }
    let (_, one) = build_disc_sum(2.0).map_err(|e| e.to_string())?;
    for (i, v) in one.per_component.iter().enumerate() {
        ensure((v - PI).abs() <= 1e-9, format!("disc {i}: {v}"))?;
    }
    for (i, w) in one.partial_sums.windows(2).enumerate() {
        ensure(
            w[1] > w[0] && ((w[1] - w[0]) - PI).abs() <= 1e-9,
            format!("partial sums {i}: {w:?}"),
        )?;
    }
    Ok(format!(
        "J margin {:.3e}; {} equal bumps; {} discs of mass π",
        shrink.margin,
        two.per_component.len(),
        one.per_component.len()
    ))
}

fn modulus_grid() -> Check {
    let t = Instant::now();
    let ring = RingDomain::new(1.0, std::f64::consts::E, 2).map_err(|e| e.to_string())?;
    let cfg = GridConfig::default();
    let j = grid_modulus_2d(&ring, Family::Curves, &cfg).map_err(|e| e.to_string())?;
    let s = grid_modulus_2d(&ring, Family::Spheres, &cfg).map_err(|e| e.to_string())?;
    let dt = t.elapsed().as_secs_f64();
    ensure(
        (j.value / (2.0 * PI) - 1.0).abs() <= 0.02,
        format!("joining {}", j.value),
    )?;
    ensure(
        (s.value * 2.0 * PI - 1.0).abs() <= 0.02,
        format!("separating {}", s.value),
    )?;
    ensure(
        (j.value * s.value - 1.0).abs() <= 0.05,
        format!("product {}", j.value * s.value),
    )?;
    ensure(
        j.certificate.passed() && s.certificate.passed(),
        "grid certificates",
    )?;
    let w = RadialWeight::constant(2, 1.0);
    let eta = ring_upper_bound(&w, &ring).map_err(|e| e.to_string())?;
    ensure(
        (eta.certificate.lhs - 1.0).abs() <= 1e-9,
        format!("η₀ integral {}", eta.certificate.lhs),
    )?;
    let rho = spheres_lower_bound(&w, ring.r1, ring.r2).map_err(|e| e.to_string())?;
    ensure(
        rho.certificate.lhs >= 1.0 - 1e-6,
        format!("ρ₀ certificate {}", rho.certificate.lhs),
    )?;
    ensure(dt < 120.0, format!("took {dt:.1} s"))?;
    Ok(format!(
        "joining {:.5}, separating {:.5}, product {:.5}, {dt:.2} s",
        j.value,
        s.value,
        j.value * s.value
    ))
}

fn distortion_stretch() -> Check {
    let h = holder_check(0.5, 3).map_err(|e| e.to_string())?;
    ensure((h.k_f - 2.0).abs() <= 1e-6, format!("K_f {}", h.k_f))?;
    ensure(
        (h.fitted_exponent - 0.5).abs() <= 1e-6,
        format!("fitted exponent {}", h.fitted_exponent),
    )?;
    ensure(
        (h.bound_exponent - h.fitted_exponent).abs() <= 1e-6,
        format!("bound exponent {}", h.bound_exponent),
    )?;
    let want = 4.0 * PI * 4.0;
    ensure(
        (h.hypothesis_constant / want - 1.0).abs() <= 1e-6,
        format!("constant {} vs {want}", h.hypothesis_constant),
    )?;
    Ok(format!(
        "K_f {:.9}, β {:.9}, c/16π {:.9}",
        h.k_f,
        h.fitted_exponent,
        h.hypothesis_constant / want
    ))
}

fn suite_reproducible() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(name);
        let st = Command::new(env!("CARGO_BIN_EXE_orliczlab"))
            .args(["suite", "--seed", "11", "--report"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(
            st.status.code() == Some(0),
            format!(
                "suite exit {:?}: {}",
                st.status.code(),
                String::from_utf8_lossy(&st.stderr)
            ),
        )?;
        ensure(
            path.with_file_name(format!("{}.sidecar.json", name.trim_end_matches(".json")))
                .exists(),
            "sidecar missing",
        )?;
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let a = run("first.json")?;
    let b = run("second.json")?;
    ensure(a == b, "reports differ")?;
    let v: serde_json::Value = serde_json::from_slice(&a).map_err(|e| e.to_string())?;
    let checks = v["check_count"].as_u64().unwrap_or(0);
    ensure(
        checks >= 20 && v["tally"]["fail"] == 0,
        format!("{checks} checks, tally {}", v["tally"]),
    )?;
    Ok(format!(
        "{} bytes identical, {checks} checks, 0 FAIL",
        a.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 calderon classifier on powers", classifier_on_powers),
        ("2 six condition forms agree", six_forms_agree),
        (
            "3 log integral dominates inverse tail",
            log_integral_bound_on_battery,
        ),
        ("4 extremal profile", extremal_profile),
        ("5 counterexample at depth five", counterexample_depth_five),
        ("6 FMO disc and bump sums", oscillation_examples),
        ("7 ring modulus closed forms vs grid", modulus_grid),
        ("8 radial stretch distortion", distortion_stretch),
        ("9 suite reproducibility", suite_reproducible),
    ];
    // written to the raw handle so the lines show without --nocapture
    let mut out = std::io::stdout();
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let line = match f() {
            Ok(detail) => format!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed.push(name);
                format!("criterion {name}: FAIL ({why})")
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
