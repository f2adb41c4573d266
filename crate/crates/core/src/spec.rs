//! Textual specifications of gauges, weights, oscillation fields and model maps.
//!
//! A spec is `name` or `name:key=value,key=value`. Tables are referenced as
//! `table:<path>`; the caller supplies the loader, so this module does no IO.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::distortion::ModelMap;
use crate::error::{Error, Result};
use crate::numeric::Pchip;
use crate::orlicz::Gauge;
use crate::oscillation::{FieldKind, OscillationField};
use crate::weight::{Profile, RadialWeight};

/// Reads a two-column table `(t, value)` from the given path.
pub type TableLoader<'a> = &'a dyn Fn(&str) -> Result<(Vec<f64>, Vec<f64>)>;

/// A table loader that refuses every path.
pub fn no_tables(path: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    Err(Error::Unsupported(alloc::format!(
        "no table loader available for `{path}`"
    )))
}

fn perr(spec: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

/// Name and parameter list of a spec.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<'s> {
    pub name: &'s str,
    pub params: Vec<(&'s str, f64)>,
}

impl Parsed<'_> {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }
}

/// Splits `name:k=v,...`; rejects repeated keys and non-numeric values.
pub fn split(spec: &str) -> Result<Parsed<'_>> {
    let spec_t = spec.trim();
    let (name, rest) = match spec_t.split_once(':') {
        Some((n, r)) => (n.trim(), Some(r)),
        None => (spec_t, None),
    };
    if name.is_empty() {
        return Err(perr(spec, "empty name"));
    }
    let mut params: Vec<(&str, f64)> = Vec::new();
    if let Some(rest) = rest {
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| perr(spec, alloc::format!("`{item}` is not key=value")))?;
            let k = k.trim();
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| perr(spec, alloc::format!("`{v}` is not a number")))?;
            if params.iter().any(|(q, _)| *q == k) {
                return Err(perr(spec, alloc::format!("key `{k}` given twice")));
            }
            params.push((k, v));
        }
    }
    Ok(Parsed { name, params })
}

/// Path part of a `table:<path>` spec.
pub fn table_path(spec: &str) -> Option<&str> {
    spec.trim()
        .strip_prefix("table:")
        .map(str::trim)
        .filter(|p| !p.is_empty())
}

fn take(
    parsed: &Parsed<'_>,
    spec: &str,
    allowed: &[&str],
    defaults: &[(&str, f64)],
) -> Result<Vec<f64>> {
    for (k, _) in &parsed.params {
        if !allowed.contains(k) {
            return Err(perr(
                spec,
                alloc::format!("unknown parameter `{k}` for `{}`", parsed.name),
            ));
        }
    }
    allowed
        .iter()
        .map(|k| {
            parsed
                .get(k)
                .or_else(|| defaults.iter().find(|(d, _)| d == k).map(|(_, v)| *v))
                .ok_or_else(|| perr(spec, alloc::format!("missing parameter `{k}`")))
        })
        .collect()
}

fn count(spec: &str, v: f64, what: &str) -> Result<usize> {
    if v >= 0.0 && v == crate::math::floor(v) && v < 1e6 {
        Ok(v as usize)
    } else {
        Err(perr(
            spec,
            alloc::format!("{what} must be a non-negative integer"),
        ))
    }
}

/// Gauge families: `pow:p`, `powlog:p,s`, `exp:a` (`e^{t^a} - 1`),
/// `expraw:a`, `expexp`, `min:c`, `const:c`, `table:<path>`.
pub fn parse_gauge(spec: &str, tables: TableLoader<'_>) -> Result<Gauge> {
    if let Some(path) = table_path(spec) {
        let (t, v) = tables(path)?;
        return Gauge::table(t, v);
    }
    let p = split(spec)?;
    let g = match p.name {
        "pow" => Gauge::Power {
            p: take(&p, spec, &["p"], &[])?[0],
        },
        "powlog" => {
            let v = take(&p, spec, &["p", "s"], &[])?;
            Gauge::PowerLog { p: v[0], s: v[1] }
        }
        "exp" => Gauge::ExpPowerM1 {
            a: take(&p, spec, &["a"], &[("a", 1.0)])?[0],
        },
        "expraw" => Gauge::ExpPower {
            a: take(&p, spec, &["a"], &[("a", 1.0)])?[0],
        },
        "expexp" => {
            take(&p, spec, &[], &[])?;
            Gauge::DoubleExp
        }
        "min" => Gauge::Capped {
            cap: take(&p, spec, &["c"], &[])?[0],
        },
        "const" => Gauge::Constant {
            c: take(&p, spec, &["c"], &[])?[0],
        },
        other => return Err(perr(spec, alloc::format!("unknown gauge family `{other}`"))),
    };
    Ok(g)
}

/// Weight profiles in dimension `n`: `const:c`, `pow:c,a` (`c r^a`),
/// `logpow:c,s` (`c ln^s(1/r)`), `table:<path>` (pairs `(r, q)`).
pub fn parse_weight(spec: &str, n: usize, tables: TableLoader<'_>) -> Result<RadialWeight> {
    let profile = if let Some(path) = table_path(spec) {
        let (r, q) = tables(path)?;
        Profile::Table {
            table: Pchip::new(r, q)?,
        }
    } else {
        let p = split(spec)?;
        match p.name {
            "const" => Profile::Constant {
                c: take(&p, spec, &["c"], &[("c", 1.0)])?[0],
            },
            "pow" => {
                let v = take(&p, spec, &["c", "a"], &[("c", 1.0)])?;
                Profile::Power { c: v[0], a: v[1] }
            }
            "logpow" => {
                let v = take(&p, spec, &["c", "s"], &[("c", 1.0)])?;
                Profile::LogPower { c: v[0], s: v[1] }
            }
            other => {
                return Err(perr(
                    spec,
                    alloc::format!("unknown weight family `{other}`"),
                ))
            }
        }
    };
    if let Profile::Constant { c } | Profile::Power { c, .. } | Profile::LogPower { c, .. } =
        profile
    {
        if !(c > 0.0) {
            return Err(perr(spec, "weight coefficient must be positive"));
        }
    }
    RadialWeight::new(n, profile)
}

/// Oscillation field spec. The two disc-sum examples come with their own
/// verification battery, so they stay distinguishable from plain fields.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Plain(OscillationField),
    DiscExample { p: f64 },
    BumpExample { delta: f64 },
}

/// `log-recip`, `const:c`, `invpow:a`, `half-plane`, `disc-sum:p`,
/// `bump-sum:delta`, `table:<path>` (radial profile `(r, u)`).
pub fn parse_field(spec: &str, tables: TableLoader<'_>) -> Result<FieldSpec> {
    if let Some(path) = table_path(spec) {
        let (r, u) = tables(path)?;
        let table = Pchip::new(r, u)?;
        return Ok(FieldSpec::Plain(OscillationField::new(
            FieldKind::RadialTable { table },
        )));
    }
    let p = split(spec)?;
    let kind = match p.name {
        "log-recip" => {
            take(&p, spec, &[], &[])?;
            FieldKind::LogRecip
        }
        "half-plane" => {
            take(&p, spec, &[], &[])?;
            FieldKind::HalfPlane
        }
        "const" => FieldKind::Constant {
            c: take(&p, spec, &["c"], &[])?[0],
        },
        "invpow" => FieldKind::InversePower {
            a: take(&p, spec, &["a"], &[])?[0],
        },
        "disc-sum" => {
            let v = take(&p, spec, &["p"], &[])?[0];
            if !(v >= 1.0) {
                return Err(perr(spec, "disc-sum needs p >= 1"));
            }
            return Ok(FieldSpec::DiscExample { p: v });
        }
        "bump-sum" => {
            let v = take(&p, spec, &["delta"], &[])?[0];
            if !(v > 0.0) {
                return Err(perr(spec, "bump-sum needs delta > 0"));
            }
            return Ok(FieldSpec::BumpExample { delta: v });
        }
        other => return Err(perr(spec, alloc::format!("unknown field `{other}`"))),
    };
    Ok(FieldSpec::Plain(OscillationField::new(kind)))
}

/// `identity:n`, `stretch:alpha,n`.
pub fn parse_map(spec: &str) -> Result<ModelMap> {
    let p = split(spec)?;
    match p.name {
        "identity" => {
            let n = count(spec, take(&p, spec, &["n"], &[("n", 2.0)])?[0], "n")?;
            if n < 2 {
                return Err(perr(spec, "n must be at least 2"));
            }
            Ok(ModelMap::Identity { n })
        }
        "stretch" => {
            let v = take(&p, spec, &["alpha", "n"], &[("n", 2.0)])?;
            ModelMap::stretch(v[0], count(spec, v[1], "n")?)
        }
        other => Err(perr(spec, alloc::format!("unknown map `{other}`"))),
    }
}

/// Comma-separated list of reals, e.g. a ring `1,2.718,2` or a point `0,0`.
pub fn parse_reals(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| perr(spec, alloc::format!("`{s}` is not a number")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn gauge_families_round_trip() {
        for g in [
            Gauge::Power { p: 3.0 },
            Gauge::PowerLog { p: 2.0, s: 2.0 },
            Gauge::ExpPowerM1 { a: 0.5 },
            Gauge::ExpPower { a: 1.0 },
            Gauge::DoubleExp,
            Gauge::Capped { cap: 2.5 },
            Gauge::Constant { c: 1.0 },
        ] {
            assert_eq!(parse_gauge(&g.spec_string(), &no_tables).unwrap(), g);
        }
    }

    #[test]
    fn gauge_errors() {
        assert!(matches!(
            parse_gauge("pow", &no_tables),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_gauge("pow:p=x", &no_tables),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_gauge("pow:p=2,q=1", &no_tables),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_gauge("pow:p=2,p=3", &no_tables),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_gauge("cosh", &no_tables),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_gauge("table:x.csv", &no_tables),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn table_gauge_uses_loader() {
        let load = |p: &str| {
            assert_eq!(p, "g.csv");
            Ok((vec![1.0, 2.0, 4.0], vec![1.0, 4.0, 16.0]))
        };
        let g = parse_gauge("table: g.csv", &load).unwrap();
        assert_eq!(g.eval(2.0), 4.0);
        assert_eq!(g.eval(0.0), 0.0);
    }

    #[test]
    fn weights_fields_maps() {
        let w = parse_weight("pow:a=-0.5", 3, &no_tables).unwrap();
        assert_eq!(w.profile, Profile::Power { c: 1.0, a: -0.5 });
        assert_eq!(w.n, 3);
        assert!(parse_weight("const:c=0", 2, &no_tables).is_err());
        assert_eq!(
            parse_field("bump-sum:delta=0.5", &no_tables).unwrap(),
            FieldSpec::BumpExample { delta: 0.5 }
        );
        assert_eq!(
            parse_field("disc-sum:p=2", &no_tables).unwrap(),
            FieldSpec::DiscExample { p: 2.0 }
        );
        match parse_field("log-recip", &no_tables).unwrap() {
            FieldSpec::Plain(f) => assert_eq!(f.kind, FieldKind::LogRecip),
            other => panic!("{other:?}"),
        }
        assert!(parse_field("log-recip:a=1", &no_tables).is_err());
        assert_eq!(
            parse_map("stretch:alpha=0.5,n=3").unwrap(),
            ModelMap::RadialStretch { alpha: 0.5, n: 3 }
        );
        assert!(parse_map("stretch:alpha=0.5,n=2.5").is_err());
        assert!(parse_map("stretch:alpha=-1,n=3").is_err());
        assert_eq!(parse_reals("1, 2.5,3").unwrap(), vec![1.0, 2.5, 3.0]);
        assert!(parse_reals("1,,2").is_err());
    }
}
