use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::experiment::config::FORMAT_VERSION;
use crate::Result;

pub(crate) fn header(hash: &str) -> String {
    format!("# qwalk-format {FORMAT_VERSION} config-sha256 {hash}\n")
}

/// 17 significant digits; `-0` prints as `0`.
pub(crate) fn float(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

pub(crate) fn opt(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

/// Accumulates one CSV file in memory so that it is written in a single call.
pub(crate) struct Csv {
    text: String,
}

impl Csv {
    pub(crate) fn new(hash: &str, columns: &str) -> Self {
        let mut text = header(hash);
        text.push_str(columns);
        text.push('\n');
        Csv { text }
    }

    pub(crate) fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub(crate) fn save(self, path: &Path) -> Result<PathBuf> {
        save(path, self.text.as_bytes())
    }
}

pub(crate) fn save(path: &Path, bytes: &[u8]) -> Result<PathBuf> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, bytes)?;
    Ok(path.to_path_buf())
}

pub(crate) fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

pub(crate) fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Unbiased sample variance; zero for a single value.
pub(crate) fn variance(values: &[f64]) -> Option<f64> {
    let m = mean(values)?;
    if values.len() < 2 {
        return Some(0.0);
    }
    Some(values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64)
}
