//! Per-radius growth records and their CSV form.
//!
//! The CSV layout is the stable exchange format of the CLI: one header row,
//! comma separator, scientific notation with 17 significant digits so a
//! reload reproduces every value bit for bit. An empty `floor` cell encodes
//! the absence of a known lower bound.

use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str = "R,M_R,I_R,Lambda_R,envelope,ratio,floor";

/// One grid radius worth of sweep output.
///
/// `envelope` is the modulus-majorant envelope `M(R) exp(-2 pi / Lambda(R))`;
/// `ratio` is the quantity the selected criterion monitors (for the envelope
/// criterion it repeats `envelope`). `floor` is the proven lower bound for
/// the envelope when one is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "M_R")]
    pub max_modulus: f64,
    #[serde(rename = "I_R")]
    pub weight_mass: f64,
    #[serde(rename = "Lambda_R")]
    pub majorant: f64,
    pub envelope: f64,
    pub ratio: f64,
    #[serde(default)]
    pub floor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportCsvError {
    #[error("report CSV must start with the header '{CSV_HEADER}', found {found:?}")]
    Header { found: String },

    #[error("line {line}: expected 7 comma-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },

    #[error("line {line}: {text:?} is not a finite number")]
    Number { line: usize, text: String },
}

/// One CSV cell: scientific notation with 17 significant digits, enough for
/// a bit-exact reload.
pub fn cell(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders reports in the stable CSV layout, header included.
pub fn reports_to_csv(reports: &[GrowthReport]) -> String {
    let mut out = String::with_capacity(32 + reports.len() * 160);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&cell(r.radius));
        for v in [r.max_modulus, r.weight_mass, r.majorant, r.envelope, r.ratio] {
            out.push(',');
            out.push_str(&cell(v));
        }
        out.push(',');
        if let Some(f) = r.floor {
            out.push_str(&cell(f));
        }
        out.push('\n');
    }
    out
}

fn parse_cell(line: usize, text: &str) -> Result<f64, ReportCsvError> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| ReportCsvError::Number { line, text: text.to_string() })?;
    if !v.is_finite() {
        return Err(ReportCsvError::Number { line, text: text.to_string() });
    }
    Ok(v)
}

/// Parses CSV produced by [`reports_to_csv`] (or equivalent hand-written
/// fixtures). Every numeric field must be finite; ordering is not enforced
/// here, the verdict machinery checks it.
pub fn parse_reports_csv(text: &str) -> Result<Vec<GrowthReport>, ReportCsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim_end_matches('\r') == CSV_HEADER => {}
        other => {
            return Err(ReportCsvError::Header {
                found: other.map(|(_, s)| s.to_string()).unwrap_or_default(),
            })
        }
    }
    let mut out = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let trimmed = raw.trim_end_matches('\r');
        if trimmed.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 7 {
            return Err(ReportCsvError::FieldCount { line, found: fields.len() });
        }
        let floor = if fields[6].trim().is_empty() {
            None
        } else {
            Some(parse_cell(line, fields[6])?)
        };
        out.push(GrowthReport {
            radius: parse_cell(line, fields[0])?,
            max_modulus: parse_cell(line, fields[1])?,
            weight_mass: parse_cell(line, fields[2])?,
            majorant: parse_cell(line, fields[3])?,
            envelope: parse_cell(line, fields[4])?,
            ratio: parse_cell(line, fields[5])?,
            floor,
        });
    }
    Ok(out)
}
