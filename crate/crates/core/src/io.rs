//! CSV and JSON sidecar output.
//!
//! Numbers are written with 17 significant digits in scientific notation,
//! independent of locale. Every CSV `foo.csv` has a sidecar `foo.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::TimeSeries;

/// `x` as `d.dddddddddddddddde±x`.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `foo.csv` → `foo.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Header: `time`, one `p_<label>` per basis state, `norm`, then `entropy`
/// when the samples carry it.
pub fn series_header(series: &TimeSeries) -> Vec<String> {
    let mut h = vec!["time".to_string()];
    h.extend(series.basis().labels().iter().map(|l| format!("p_{}", l.name())));
    h.push("norm".into());
    if series.entropies().is_some() && !series.is_empty() {
        h.push("entropy".into());
    }
    h
}

pub fn series_to_csv(series: &TimeSeries) -> String {
    let with_entropy = series.entropies().is_some() && !series.is_empty();
    let mut out = series_header(series).join(",");
    out.push('\n');
    for s in series.samples() {
        let mut row = vec![fmt_num(s.time)];
        row.extend(s.populations.iter().map(|&p| fmt_num(p)));
        row.push(fmt_num(s.norm));
        if with_entropy {
            row.push(fmt_num(s.entropy.unwrap_or(f64::NAN)));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Metadata written next to every CSV.
#[derive(Clone, Debug, Serialize)]
pub struct Sidecar {
    /// `sweep`, `dynamics`, `floquet`, `resonances` or `entropy`.
    pub kind: String,
    pub version: String,
    /// Seconds since the Unix epoch; the only non-deterministic field.
    pub generated_at: u64,
    pub columns: Vec<String>,
    /// Invocation or library call that produced the data.
    pub run_spec: serde_json::Value,
    /// Sweep or trajectory metadata.
    pub data: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<serde_json::Value>,
}

impl Sidecar {
    pub fn new(kind: &str, columns: Vec<String>, run_spec: serde_json::Value, data: serde_json::Value) -> Self {
        let generated_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Sidecar {
            kind: kind.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            generated_at,
            columns,
            run_spec,
            data,
            figure: None,
        }
    }

    pub fn with_figure(mut self, binding: serde_json::Value) -> Self {
        self.figure = Some(binding);
        self
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Writes `csv` to `path` and the sidecar to `path` with a `.json` extension.
pub fn write_csv_with_sidecar(path: &Path, csv: &str, sidecar: &Sidecar) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, csv).map_err(|e| io_err(path, e))?;
    let meta = sidecar_path(path);
    let json = serde_json::to_string_pretty(sidecar).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(&meta, json + "\n").map_err(|e| io_err(&meta, e))
}
