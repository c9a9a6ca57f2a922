//! Two-column numeric tables `(radius, value)` read from CSV text.
//!
//! The format is shared by tabulated coefficient fields and tabulated weights:
//! one `radius,value` pair per line, an optional single header line, radii
//! strictly increasing and positive, plain decimal or scientific numbers.

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("table is not valid UTF-8")]
    NotUtf8,

    #[error("line {line}: expected 2 comma-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },

    #[error("line {line}: cannot parse {text:?} as a number")]
    Number { line: usize, text: String },

    #[error("line {line}: values must be finite")]
    NonFinite { line: usize },

    #[error("line {line}: radius must be positive")]
    NonPositiveRadius { line: usize },

    #[error("line {line}: radii must be strictly increasing")]
    NotIncreasing { line: usize },

    #[error("table needs at least 2 rows, found {rows}")]
    TooFewRows { rows: usize },
}

/// Samples of a radial function: positive, strictly increasing radii paired
/// with finite values. Interpretation of the value column (dilatation, weight)
/// belongs to the consumer.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTable {
    rows: Vec<(f64, f64)>,
}

impl RadialTable {
    pub fn from_rows(rows: Vec<(f64, f64)>) -> Result<Self, TableError> {
        if rows.len() < 2 {
            return Err(TableError::TooFewRows { rows: rows.len() });
        }
        let mut prev = 0.0;
        for (i, &(radius, value)) in rows.iter().enumerate() {
            let line = i + 1;
            if !radius.is_finite() || !value.is_finite() {
                return Err(TableError::NonFinite { line });
            }
            if radius <= 0.0 {
                return Err(TableError::NonPositiveRadius { line });
            }
            if radius <= prev {
                return Err(TableError::NotIncreasing { line });
            }
            prev = radius;
        }
        Ok(RadialTable { rows })
    }

    pub fn parse_bytes(bytes: &[u8]) -> Result<Self, TableError> {
        let text = std::str::from_utf8(bytes).map_err(|_| TableError::NotUtf8)?;
        Self::parse_str(text)
    }

    pub fn parse_str(text: &str) -> Result<Self, TableError> {
        let mut rows = Vec::new();
        let mut saw_data = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            match parse_row(trimmed) {
                Ok(pair) => {
                    saw_data = true;
                    rows.push((line, pair));
                }
                // A single leading line with a non-numeric field is an optional header.
                Err(e) => {
                    if saw_data || !looks_like_header(trimmed) {
                        return Err(attach_line(e, line));
                    }
                    saw_data = true;
                }
            }
        }

        if rows.len() < 2 {
            return Err(TableError::TooFewRows { rows: rows.len() });
        }
        let mut prev = 0.0;
        let mut out = Vec::with_capacity(rows.len());
        for (line, (radius, value)) in rows {
            if radius <= 0.0 {
                return Err(TableError::NonPositiveRadius { line });
            }
            if radius <= prev {
                return Err(TableError::NotIncreasing { line });
            }
            prev = radius;
            out.push((radius, value));
        }
        Ok(RadialTable { rows: out })
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    pub fn min_radius(&self) -> f64 {
        self.rows[0].0
    }

    pub fn max_radius(&self) -> f64 {
        self.rows[self.rows.len() - 1].0
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|&(_, v)| v)
    }

    /// Piecewise-linear interpolation of the value column in the coordinate
    /// given by `x`. `x` must be strictly increasing over the rows.
    pub(crate) fn interpolate_by<F: Fn(f64) -> f64>(&self, x: F, at: f64) -> f64 {
        let rows = &self.rows;
        let pos = rows.partition_point(|&(r, _)| x(r) <= at);
        if pos == 0 {
            return rows[0].1;
        }
        if pos == rows.len() {
            return rows[rows.len() - 1].1;
        }
        let (r0, v0) = rows[pos - 1];
        let (r1, v1) = rows[pos];
        let (x0, x1) = (x(r0), x(r1));
        if at == x0 {
            return v0;
        }
        let s = (at - x0) / (x1 - x0);
        v0 + s * (v1 - v0)
    }
}

enum RowError {
    FieldCount(usize),
    Number(String),
}

fn attach_line(e: RowError, line: usize) -> TableError {
    match e {
        RowError::FieldCount(found) => TableError::FieldCount { line, found },
        RowError::Number(text) => TableError::Number { line, text },
    }
}

fn parse_row(line: &str) -> Result<(f64, f64), RowError> {
    let mut fields = line.split(',');
    let a = fields.next().unwrap_or("");
    let b = fields.next().ok_or(RowError::FieldCount(1))?;
    let extra = fields.count();
    if extra > 0 {
        return Err(RowError::FieldCount(2 + extra));
    }
    Ok((parse_number(a)?, parse_number(b)?))
}

fn parse_number(field: &str) -> Result<f64, RowError> {
    let t = field.trim();
    // `parse::<f64>` accepts "inf" and "nan" spellings; those are not numbers here.
    let v: f64 = t.parse().map_err(|_| RowError::Number(t.to_owned()))?;
    if !v.is_finite() {
        return Err(RowError::Number(t.to_owned()));
    }
    Ok(v)
}

fn looks_like_header(line: &str) -> bool {
    // Headers name the columns, so at least one field is not a number.
    // A lone word without a comma is rejected rather than skipped.
    line.contains(',') && line.split(',').any(|f| f.trim().parse::<f64>().is_err())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_rows() {
        let t = RadialTable::parse_str("1.0,1.0\n10.0,4.0\n").unwrap();
        assert_eq!(t.rows(), &[(1.0, 1.0), (10.0, 4.0)]);
        assert_eq!(t.min_radius(), 1.0);
        assert_eq!(t.max_radius(), 10.0);
    }

    #[test]
    fn skips_optional_header_and_blank_lines() {
        let t = RadialTable::parse_str("radius,K\n\n1,1\n2.5e0, 3.0 \n").unwrap();
        assert_eq!(t.rows(), &[(1.0, 1.0), (2.5, 3.0)]);
    }

    #[test]
    fn header_is_only_allowed_on_the_first_data_line() {
        let err = RadialTable::parse_str("1,1\nradius,K\n2,2\n").unwrap_err();
        assert!(matches!(err, TableError::Number { line: 2, .. }));
    }

    #[test]
    fn rejects_wrong_field_counts() {
        assert!(matches!(
            RadialTable::parse_str("1,2,3\n4,5\n"),
            Err(TableError::FieldCount { line: 1, found: 3 })
        ));
        assert!(matches!(
            RadialTable::parse_str("justoneword\n1,2\n2,3\n"),
            Err(TableError::FieldCount { line: 1, found: 1 })
        ));
    }

    #[test]
    fn rejects_non_finite_and_non_increasing_radii() {
        assert!(matches!(
            RadialTable::parse_str("1,1\ninf,2\n"),
            Err(TableError::Number { line: 2, .. })
        ));
        assert!(matches!(
            RadialTable::parse_str("1,1\n1,2\n"),
            Err(TableError::NotIncreasing { line: 2 })
        ));
        assert!(matches!(
            RadialTable::parse_str("-1,1\n2,2\n"),
            Err(TableError::NonPositiveRadius { line: 1 })
        ));
    }

    #[test]
    fn requires_two_rows() {
        assert!(matches!(
            RadialTable::parse_str("radius,K\n1,1\n"),
            Err(TableError::TooFewRows { rows: 1 })
        ));
    }

    #[test]
    fn windows_line_endings_are_accepted() {
        let t = RadialTable::parse_str("r,v\r\n1,1\r\n2,4\r\n").unwrap();
        assert_eq!(t.rows(), &[(1.0, 1.0), (2.0, 4.0)]);
    }

    #[test]
    fn interpolation_is_linear_in_the_chosen_coordinate() {
        let t = RadialTable::parse_str("1,1\n10,4\n").unwrap();
        // Linear in ln r: the geometric midpoint maps to the value midpoint.
        let mid = t.interpolate_by(f64::ln, 10.0f64.sqrt().ln());
        assert!((mid - 2.5).abs() < 1e-12);
        // Node hits are exact.
        assert_eq!(t.interpolate_by(f64::ln, 0.0), 1.0);
        assert_eq!(t.interpolate_by(f64::ln, 10.0f64.ln()), 4.0);
    }
}
