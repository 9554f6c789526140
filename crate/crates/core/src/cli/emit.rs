//! CSV and JSON serialization of result rows.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::Format;

pub const CSV_HEADER: &str = "command,method,mode,order,b_over_c,cos_theta,coefficient,error_estimate";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub command: String,
    pub method: String,
    pub mode: String,
    pub order: u32,
    pub b_over_c: Option<f64>,
    pub cos_theta: Option<f64>,
    /// Best available value; NaN (JSON `null`) when nothing was computed.
    pub coefficient: f64,
    pub error_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
}

/// 17 significant digits, e.g. `-1.1936620731892151e-1`.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.command,
            r.method,
            r.mode,
            r.order,
            optional(r.b_over_c),
            optional(r.cos_theta),
            format_number(r.coefficient),
            format_number(r.error_estimate),
        ));
    }
    out
}

pub fn to_json(rows: &[ResultRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

/// Parse rows back from [`to_json`] output; `null` numbers become NaN.
pub fn from_json(text: &str) -> serde_json::Result<Vec<ResultRow>> {
    #[derive(Deserialize)]
    struct Raw {
        command: String,
        method: String,
        mode: String,
        order: u32,
        b_over_c: Option<f64>,
        cos_theta: Option<f64>,
        coefficient: Option<f64>,
        error_estimate: Option<f64>,
        #[serde(default)]
        failure: Option<String>,
    }
    let raw: Vec<Raw> = serde_json::from_str(text)?;
    Ok(raw
        .into_iter()
        .map(|r| ResultRow {
            command: r.command,
            method: r.method,
            mode: r.mode,
            order: r.order,
            b_over_c: r.b_over_c,
            cos_theta: r.cos_theta,
            coefficient: r.coefficient.unwrap_or(f64::NAN),
            error_estimate: r.error_estimate.unwrap_or(f64::NAN),
            failure: r.failure,
        })
        .collect())
}

#[derive(Debug)]
pub enum EmitError {
    Empty,
    Io(std::io::Error),
}

impl std::fmt::Display for EmitError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EmitError::Empty => write!(f, "no results to write"),
            EmitError::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

/// Write rows to `path` (stdout when `None`).
pub fn emit(rows: &[ResultRow], format: Format, path: Option<&Path>) -> Result<(), EmitError> {
    if rows.is_empty() {
        return Err(EmitError::Empty);
    }
    let text = match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(rows),
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(EmitError::Io),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(EmitError::Io),
    }
}
