//! One function per subcommand. Each returns an [`Outcome`]: the report
//! value, its checks and any files to write. Nothing is written here, so the
//! suite can run the same code without touching the disk.

use std::path::{Path, PathBuf};

use orliczlab_core::counterexample::{
    build_counterexample, CounterexampleConfig, CounterexampleModel,
};
use orliczlab_core::distortion::{kf_numeric, ModelMap};
use orliczlab_core::extremal::{
    build_profile, verify_calderon_pair, ExtremalConfig, Normalization,
};
use orliczlab_core::integral::{
    calderon_condition, condition_equivalence_report, log_integral_bound_check, verdicts_agree,
    Classification,
};
use orliczlab_core::modulus::{
    grid_modulus_2d, hesse_ziemer_check, ring_upper_bound, spheres_lower_bound, Family, GridConfig,
    RingDomain,
};
use orliczlab_core::numeric::geomspace;
use orliczlab_core::oscillation::{
    build_bump_sum, build_disc_sum, dyadic_scales, fmo_at_point, PolarRule,
};
use orliczlab_core::report::{Relation, Tally};
use orliczlab_core::spec::{
    parse_field, parse_gauge, parse_map, parse_reals, parse_weight, FieldSpec,
};
use orliczlab_core::weight::Profile;
use orliczlab_core::{OrliczFunction, Status, VerificationReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cli::{Command, DistortionCheck, Expect, FamilyArg, Normalize, VerifyCheck};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::io::{self, table_loader, PlotTable};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    pub report: Value,
    pub tally: Tally,
    pub artifacts: Vec<(PathBuf, Vec<u8>)>,
    pub plot: Option<(PathBuf, PlotTable)>,
    /// Wall-clock detail for the sidecar.
    pub timing: Value,
}

impl Outcome {
    pub fn status(&self) -> Status {
        overall(&self.tally)
    }

    pub fn status_name(&self) -> &'static str {
        status_name(self.status())
    }
}

pub fn overall(t: &Tally) -> Status {
    if t.fail > 0 {
        Status::Fail
    } else if t.inconclusive > 0 {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Inconclusive => "INCONCLUSIVE",
    }
}

fn value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Common envelope: command-specific fields plus the run parameters, the
/// constants with their provenance, the checks and the tally.
struct Builder {
    fields: Map<String, Value>,
    checks: Vec<VerificationReport>,
    artifacts: Vec<(PathBuf, Vec<u8>)>,
    plot: Option<(PathBuf, PlotTable)>,
}

impl Builder {
    fn new() -> Self {
        Self {
            fields: Map::new(),
            checks: Vec::new(),
            artifacts: Vec::new(),
            plot: None,
        }
    }

    fn field(&mut self, k: &str, v: impl Serialize) {
        self.fields.insert(k.to_string(), value(&v));
    }

    fn merge(&mut self, v: impl Serialize) {
        if let Value::Object(m) = value(&v) {
            self.fields.extend(m);
        }
    }

    fn check(&mut self, r: VerificationReport) {
        self.checks.push(r);
    }

    fn finish(mut self, cmd: &Command, cfg: &RunConfig) -> Outcome {
        let tally = Tally::of(&self.checks);
        self.fields.insert("command".into(), json!(cmd.name()));
        self.fields.insert("parameters".into(), value(cmd));
        self.fields.insert("seed".into(), json!(cfg.seed));
        self.fields
            .insert("constants".into(), value(&cfg.constants));
        self.fields
            .insert("status".into(), json!(status_name(overall(&tally))));
        self.fields.insert("tally".into(), value(&tally));
        self.fields.insert("checks".into(), value(&self.checks));
        Outcome {
            command: cmd.name(),
            report: Value::Object(self.fields),
            tally,
            artifacts: self.artifacts,
            plot: self.plot,
            timing: Value::Null,
        }
    }
}

fn gauge(spec: &str) -> Result<OrliczFunction, CliError> {
    Ok(OrliczFunction::general(parse_gauge(spec, &table_loader)?)?.with_description(spec))
}

fn plot_to(
    b: &mut Builder,
    path: &Option<PathBuf>,
    table: impl FnOnce() -> Result<PlotTable, CliError>,
) -> Result<(), CliError> {
    if let Some(p) = path {
        b.plot = Some((p.clone(), table()?));
    }
    Ok(())
}

pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let b = match cmd {
        Command::CheckCondition {
            phi,
            k,
            p,
            delta,
            weight,
            n,
            expect,
            plot,
            ..
        } => check_condition(
            phi,
            *k,
            *p,
            *delta,
            weight.as_deref(),
            *n,
            *expect,
            plot,
            cfg,
        )?,
        Command::BuildExtremal {
            phi,
            k,
            out,
            normalize,
            plot,
            ..
        } => build_extremal(phi, *k, out, *normalize, plot)?,
        Command::BuildCounterexample {
            phi,
            k,
            depth,
            out,
            plot,
            ..
        } => build_model(phi, *k, *depth, out, plot)?,
        Command::VerifyCounterexample {
            model,
            phi,
            k,
            depth,
            checks,
            ..
        } => {
            let m = match (model, phi) {
                (Some(path), _) => load_model(path)?,
                (None, Some(phi)) => build_counterexample(
                    &gauge(phi)?,
                    k.expect("clap requires k"),
                    depth.expect("clap requires depth"),
                    &CounterexampleConfig::default(),
                )?,
                (None, None) => {
                    return Err(CliError::Usage("give --model or --phi/--k/--depth".into()))
                }
            };
            verify_model(&m, checks)
        }
        Command::Oscillation {
            field,
            center,
            scales,
            top,
            plot,
            ..
        } => oscillation(field, center, *scales, *top, plot)?,
        Command::Modulus {
            ring,
            weight,
            family,
            grid,
            plot,
            ..
        } => modulus(ring, weight, *family, *grid, plot)?,
        Command::Distortion {
            map,
            check,
            samples,
            ring,
            grid,
            ..
        } => distortion(map, *check, *samples, ring, *grid, cfg)?,
        Command::Suite { .. } => {
            return Err(CliError::Usage("suite cannot run inside a scenario".into()))
        }
    };
    Ok(b.finish(cmd, cfg))
}

#[allow(clippy::too_many_arguments)]
fn check_condition(
    phi_spec: &str,
    k: usize,
    p: Option<f64>,
    delta: Option<f64>,
    weight: Option<&str>,
    n: usize,
    expect: Option<Expect>,
    plot: &Option<PathBuf>,
    cfg: &RunConfig,
) -> Result<Builder, CliError> {
    let phi = gauge(phi_spec)?;
    let mut b = Builder::new();
    let v = calderon_condition(&phi, k, &cfg.classifier)?;
    b.merge(&v);
    if let Some(e) = expect {
        let want = match e {
            Expect::Convergent => Classification::Convergent,
            Expect::Divergent => Classification::Divergent,
        };
        let mut r = VerificationReport::flag(
            "calderon classification",
            "the Calderon integral of [t/φ(t)]^{1/(k-1)} converges exactly when expected",
            v.classification == want,
            format!("classified {:?}, expected {want:?}", v.classification),
        );
        if v.classification == Classification::Inconclusive {
            r = r.mark_inconclusive("classifier undecided");
        }
        b.check(r);
    }
    if let Some(p) = p {
        let forms = condition_equivalence_report(&phi, p, delta.unwrap_or(1.0), &cfg.classifier)?;
        b.check(VerificationReport::flag(
            "orlicz forms agree",
            "for convex Φ the six integral forms of the Orlicz condition converge or diverge together",
            verdicts_agree(&forms),
            forms.iter().map(|f| format!("{}: {:?}", f.condition, f.classification)).collect::<Vec<_>>().join("; "),
        ));
        b.field("forms", &forms);
    }
    if let Some(w) = weight {
        let w = parse_weight(w, n, &table_loader)?;
        b.check(log_integral_bound_check(
            &w,
            &phi,
            p.unwrap_or(1.0),
            &cfg.log_bound,
        )?);
    }
    plot_to(&mut b, plot, || {
        let mut t = PlotTable::new(&["t", "[t/phi(t)]^(1/(k-1))"]);
        let e = 1.0 / (k as f64 - 1.0);
        for x in geomspace(1.0, cfg.classifier.cutoff, 241) {
            t.push(vec![x, (x / phi.eval(x)).powf(e)]);
        }
        Ok(t)
    })?;
    Ok(b)
}

fn build_extremal(
    phi: &str,
    k: usize,
    out: &Option<PathBuf>,
    normalize: Normalize,
    plot: &Option<PathBuf>,
) -> Result<Builder, CliError> {
    let phi = gauge(phi)?;
    let ecfg = ExtremalConfig {
        normalization: match normalize {
            Normalize::Report => Normalization::Report,
            Normalize::Rescale => Normalization::Rescale,
        },
        ..ExtremalConfig::default()
    };
    let prof = build_profile(&phi, k, &ecfg)?;
    let mut b = Builder::new();
    for r in prof.check_invariants() {
        b.check(r);
    }
    let err = prof.inversion_error(&geomspace(ecfg.s_min, 1e6, 400));
    b.check(VerificationReport::compare(
        "inverse identity",
        "Ψ(h(s)) = s on the sampled range",
        err,
        Relation::Le,
        1e-9,
        0.0,
    ));
    let pair = verify_calderon_pair(&prof, ecfg.s_min);
    b.check(pair.report.clone());
    if ecfg.normalization == Normalization::Rescale {
        b.check(VerificationReport::compare(
            "radial energy",
            "the rescaled profile has total radial energy at most 1",
            prof.radial_energy(1.0)?,
            Relation::Le,
            1.0,
            1e-12,
        ));
    }
    b.field("k", k);
    b.field("scale", prof.scale);
    b.field("raw_energy", prof.raw_energy);
    b.field("energy", prof.energy);
    b.field("h_integral", &pair.h_integral);
    b.field("weighted_integral", &pair.weighted_integral);
    plot_to(&mut b, plot, || {
        let mut t = PlotTable::new(&["s", "h(s)", "F(s)"]);
        for s in geomspace(ecfg.s_min, 1.0, 161) {
            t.push(vec![s, prof.h(s), prof.f(s)]);
        }
        Ok(t)
    })?;
    if let Some(path) = out {
        b.artifacts.push((path.clone(), io::to_pretty(&prof)?));
    }
    Ok(b)
}

fn build_model(
    phi: &str,
    k: usize,
    depth: usize,
    out: &Option<PathBuf>,
    plot: &Option<PathBuf>,
) -> Result<Builder, CliError> {
    let m = build_counterexample(&gauge(phi)?, k, depth, &CounterexampleConfig::default())?;
    let mut b = Builder::new();
    for r in m.check_invariants() {
        b.check(r);
    }
    b.field("k", m.k);
    b.field("depth", m.depth);
    b.field("levels", &m.levels);
    plot_to(&mut b, plot, || {
        let mut t = PlotTable::new(&["level", "ln r", "ln rho", "ln rho*", "energy"]);
        for lv in &m.levels {
            t.push(vec![
                lv.l as f64,
                lv.ln_r,
                lv.ln_rho,
                lv.ln_rho_star,
                lv.energy,
            ]);
        }
        Ok(t)
    })?;
    if let Some(path) = out {
        b.artifacts.push((path.clone(), io::to_pretty(&m)?));
    }
    Ok(b)
}

pub fn load_model(path: &Path) -> Result<CounterexampleModel, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| CliError::format(path, e.to_string()))
}

fn verify_model(m: &CounterexampleModel, checks: &[VerifyCheck]) -> Builder {
    let mut b = Builder::new();
    let top = m.depth.min(4);
    for c in checks {
        match c {
            VerifyCheck::Invariants => m.check_invariants().into_iter().for_each(|r| b.check(r)),
            VerifyCheck::Osc => (2..=top).for_each(|p| b.check(m.check_oscillation(p))),
            VerifyCheck::Diam => (2..=top)
                .flat_map(|p| m.check_diameter(p))
                .for_each(|r| b.check(r)),
            VerifyCheck::Energy => m.energy_budget().into_iter().for_each(|r| b.check(r)),
            VerifyCheck::Hausdorff => m
                .hausdorff_lower(m.depth)
                .into_iter()
                .for_each(|r| b.check(r)),
        }
    }
    b.field("k", m.k);
    b.field("depth", m.depth);
    b.field("levels", &m.levels);
    b
}

fn oscillation(
    field: &str,
    center: &str,
    scales: usize,
    top: f64,
    plot: &Option<PathBuf>,
) -> Result<Builder, CliError> {
    let c = parse_reals(center)?;
    if c.len() != 2 {
        return Err(CliError::Usage(format!(
            "--center needs two coordinates, got `{center}`"
        )));
    }
    if !(top > 0.0) || scales < 2 {
        return Err(CliError::Usage("need --top > 0 and --scales >= 2".into()));
    }
    let mut b = Builder::new();
    let u = match parse_field(field, &table_loader)? {
        FieldSpec::Plain(u) => u,
        FieldSpec::DiscExample { p } => {
            let (u, rep) = build_disc_sum(p)?;
            rep.reports.iter().cloned().for_each(|r| b.check(r));
            b.field("example", &rep);
            u
        }
        FieldSpec::BumpExample { delta } => {
            let (u, rep) = build_bump_sum(delta)?;
            rep.reports.iter().cloned().for_each(|r| b.check(r));
            b.field("example", &rep);
            u
        }
    };
    let eps = dyadic_scales(top, scales);
    let rule = PolarRule::default();
    let fmo = fmo_at_point(&u, [c[0], c[1]], &eps, None, &rule)?;
    fmo.reports.iter().cloned().for_each(|r| b.check(r));
    b.field("field", &u.description);
    b.field("fmo", &fmo);
    plot_to(&mut b, plot, || {
        let mut t = PlotTable::new(&["eps", "ball mean", "mean oscillation"]);
        for ((e, m), o) in fmo.eps.iter().zip(&fmo.means).zip(&fmo.oscillations) {
            t.push(vec![*e, *m, *o]);
        }
        Ok(t)
    })?;
    Ok(b)
}

fn parse_ring(ring: &str) -> Result<RingDomain, CliError> {
    let v = parse_reals(ring)?;
    let n = match v.get(2) {
        Some(n) if *n >= 2.0 && n.fract() == 0.0 => *n as usize,
        None => 2,
        _ => {
            return Err(CliError::Usage(format!(
                "ring dimension must be an integer >= 2 in `{ring}`"
            )))
        }
    };
    if v.len() < 2 || v.len() > 3 {
        return Err(CliError::Usage(format!(
            "--ring expects r1,r2[,n], got `{ring}`"
        )));
    }
    Ok(RingDomain::new(v[0], v[1], n)?)
}

fn modulus(
    ring: &str,
    weight: &str,
    family: FamilyArg,
    grid: Option<usize>,
    plot: &Option<PathBuf>,
) -> Result<Builder, CliError> {
    let ring = parse_ring(ring)?;
    let w = parse_weight(weight, ring.n, &table_loader)?;
    let fam = match family {
        FamilyArg::Spheres => Family::Spheres,
        FamilyArg::Curves => Family::Curves,
    };
    let closed = match fam {
        Family::Spheres => spheres_lower_bound(&w, ring.r1, ring.r2)?,
        Family::Curves => ring_upper_bound(&w, &ring)?,
    };
    let mut b = Builder::new();
    b.check(closed.certificate.clone());
    b.field("family", fam);
    b.field("value", closed.value);
    b.field("extremal", &closed.extremal);
    if let Some(res) = grid {
        if ring.n != 2 || w.profile != (Profile::Constant { c: 1.0 }) {
            return Err(orliczlab_core::Error::Unsupported(
                "the grid solver handles the unweighted planar ring only".into(),
            )
            .into());
        }
        let gcfg = GridConfig {
            resolution: res,
            ..GridConfig::default()
        };
        let g = grid_modulus_2d(&ring, fam, &gcfg)?;
        b.check(g.certificate.clone());
        b.check(VerificationReport::compare(
            "grid against closed form",
            "the discrete modulus agrees with the closed-form modulus of the ring",
            g.value,
            Relation::RelEq,
            closed.value,
            0.02,
        ));
        b.field("grid_value", g.value);
        b.field("grid_resolution", res);
    }
    plot_to(&mut b, plot, || {
        let mut t = PlotTable::new(&["r", "extremal density"]);
        for r in geomspace(ring.r1, ring.r2, 101) {
            let mut x = vec![0.0; ring.n];
            x[0] = r;
            t.push(vec![r, closed.extremal.eval(&x)]);
        }
        Ok(t)
    })?;
    Ok(b)
}

fn distortion(
    map: &str,
    check: DistortionCheck,
    samples: usize,
    ring: &str,
    grid: Option<usize>,
    cfg: &RunConfig,
) -> Result<Builder, CliError> {
    let m = parse_map(map)?;
    let mut b = Builder::new();
    match check {
        DistortionCheck::Holder => {
            let ModelMap::RadialStretch { alpha, n } = m else {
                return Err(orliczlab_core::Error::Unsupported(
                    "the Hölder check needs a radial stretch".into(),
                )
                .into());
            };
            let h = orliczlab_core::distortion::holder_check(alpha, n)?;
            h.reports.iter().cloned().for_each(|r| b.check(r));
            b.merge(&h);
            b.fields.remove("reports");
        }
        DistortionCheck::Kf => {
            let exact = m
                .kf_closed()
                .ok_or_else(|| CliError::Usage("map has no closed-form K_f".into()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let n = m.dim();
            let mut worst = 0.0f64;
            let mut points = Vec::with_capacity(samples);
            while points.len() < samples {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if (1e-3..=1.0).contains(&r) {
                    let k = kf_numeric(&m, &x, 1e-6)?;
                    worst = worst.max((k / exact - 1.0).abs());
                    points.push(x);
                }
            }
            b.check(
                VerificationReport::compare(
                    "sampled distortion coefficient",
                    "numerical K_f matches the closed form at random points",
                    worst,
                    Relation::Le,
                    1e-6,
                    0.0,
                )
                .with_samples(samples as u64),
            );
            b.field("k_f", exact);
            b.field("max_relative_error", worst);
        }
        DistortionCheck::Reciprocity => {
            let rv = parse_reals(ring)?;
            if rv.len() != 2 {
                return Err(CliError::Usage(format!(
                    "--ring expects r1,r2, got `{ring}`"
                )));
            }
            let rd = RingDomain::new(rv[0], rv[1], m.dim())?;
            let gcfg = grid.map(|res| GridConfig {
                resolution: res,
                ..GridConfig::default()
            });
            let res = hesse_ziemer_check(&rd, &m, gcfg.as_ref())?;
            res.reports.iter().cloned().for_each(|r| b.check(r));
            b.merge(&res);
            b.fields.remove("reports");
        }
    }
    Ok(b)
}
