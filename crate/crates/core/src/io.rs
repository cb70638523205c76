//! Point-set files: JSON `{"dim": d, "points": [[..], ..]}` or CSV with one
//! point per row.

use std::path::Path;

use crate::error::{Error, Result};
use crate::point::PointSet;

pub fn parse_json(text: &str) -> Result<PointSet> {
    serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => Error::Parse(e.to_string()),
        _ => Error::Parse(format!("invalid JSON: {e}")),
    })
}

/// One point per row, all rows the same width. A first row that does not
/// parse as numbers is taken as a header.
pub fn parse_csv(text: &str) -> Result<PointSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, rec) in reader.records().enumerate() {
        let rec = rec?;
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if lineno == 0 => continue,
            Err(e) => return Err(Error::Parse(format!("row {}: {e}", lineno + 1))),
        }
    }
    let dim = rows
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::Parse("no points".into()))?;
    PointSet::new(dim, rows)
}

/// Reads by extension: `.csv` as CSV, anything else as JSON.
pub fn read_points(path: &Path) -> Result<PointSet> {
    let text = std::fs::read_to_string(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        parse_csv(&text)
    } else {
        parse_json(&text)
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(points: &PointSet) -> String {
    let mut out = String::new();
    for p in points.iter() {
        let row: Vec<String> = p.iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_and_without_header() {
        let a = parse_csv("0,0\n1,0\n0.5,0.8\n").unwrap();
        let b = parse_csv("x,y\n0,0\n1,0\n0.5,0.8\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(parse_csv("0,0\n1\n").is_err());
        assert!(parse_csv("0,0\n1,nan\n").is_err());
        assert!(parse_csv("").is_err());
    }

    #[test]
    fn json_errors() {
        assert!(parse_json(r#"{"dim": 2, "points": [[0, 0], [1"#).is_err());
        assert!(parse_json(r#"{"dim": 2, "points": [[0, 0], [1, 2, 3]]}"#).is_err());
    }

    #[test]
    fn csv_round_trips_exactly() {
        let p = PointSet::new(2, vec![vec![0.1, 1.0 / 3.0], vec![-2e-300, 7.0]]).unwrap();
        assert_eq!(parse_csv(&to_csv(&p)).unwrap(), p);
    }
}
