//! Tables in, JSON and CSV out.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// Two-column CSV `(t, value)`. A first row that does not parse as numbers is
/// taken as a header. `t` must be strictly increasing.
pub fn read_table(path: &Path) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::format(path, e.to_string()))?;
    let (mut t, mut v) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::format(path, e.to_string()))?;
        if rec.len() < 2 {
            return Err(CliError::format(
                path,
                format!("row {} has fewer than two columns", i + 1),
            ));
        }
        let a = rec[0].parse::<f64>();
        let b = rec[1].parse::<f64>();
        match (a, b) {
            (Ok(a), Ok(b)) => {
                t.push(a);
                v.push(b);
            }
            _ if i == 0 => continue,
            _ => {
                return Err(CliError::format(
                    path,
                    format!("row {} is not numeric", i + 1),
                ))
            }
        }
    }
    if t.len() < 2 {
        return Err(CliError::format(path, "table needs at least two rows"));
    }
    if t.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CliError::format(
            path,
            "first column must be strictly increasing",
        ));
    }
    Ok((t, v))
}

/// Loader in the form the core spec parser expects.
pub fn table_loader(path: &str) -> orliczlab_core::Result<(Vec<f64>, Vec<f64>)> {
    read_table(Path::new(path)).map_err(|e| orliczlab_core::Error::Validation(e.to_string()))
}

pub fn to_pretty(v: &impl Serialize) -> Result<Vec<u8>, CliError> {
    let mut out =
        serde_json::to_vec_pretty(v).map_err(|e| CliError::format("<json>", e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn write_json(path: &Path, v: &impl Serialize) -> Result<(), CliError> {
    write_bytes(path, &to_pretty(v)?)
}

/// `report.json` → `report.sidecar.json`.
pub fn sidecar_path(report: &Path) -> PathBuf {
    let stem = report
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    report.with_file_name(format!("{stem}.sidecar.json"))
}

pub fn unix_time() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Plot data with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl PlotTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::format(path, e.to_string());
        w.write_record(&self.columns).map_err(fail)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| format!("{v:?}")))
                .map_err(fail)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::format(path, e.to_string()))?;
        write_bytes(path, &bytes)
    }
}

/// Runtime data kept out of the report so reports compare byte for byte.
pub fn sidecar(started: f64, runtime: f64, extra: Value) -> Value {
    serde_json::json!({ "started_unix": started, "runtime_seconds": runtime, "detail": extra })
}
