//! File formats: CSV ingestion, candidate centroid files, and JSON output
//! with fixed-width floats.
//!
//! CSV input is one point per row, comma-separated numeric columns, with
//! an optional header detected by a non-numeric first row. JSON output
//! renders every float with 17 significant digits so that results
//! round-trip exactly and identical runs produce byte-identical files.

use std::io::Write;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::clustering::CentroidSystem;
use crate::dataset::DataSet;
use crate::error::{Error, Result};

/// Parses CSV text into rows of coordinates.
pub fn parse_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty());

    let first = lines.next();
    if let Some((line_no, line)) = first {
        match parse_row(line) {
            Ok(row) => rows.push(row),
            // Non-numeric first row: header, skip it.
            Err(_) if line.split(',').any(|f| f.trim().parse::<f64>().is_err()) => {}
            Err(e) => {
                return Err(Error::Parse(format!("line {}: {e}", line_no + 1)));
            }
        }
    }
    for (line_no, line) in lines {
        let row =
            parse_row(line).map_err(|e| Error::Parse(format!("line {}: {e}", line_no + 1)))?;
        rows.push(row);
    }
    Ok(rows)
}

fn parse_row(line: &str) -> std::result::Result<Vec<f64>, String> {
    line.split(',')
        .map(|field| {
            let field = field.trim();
            field
                .parse::<f64>()
                .map_err(|_| format!("not a number: {field:?}"))
        })
        .collect()
}

/// Loads a data set from a CSV file (unit weights, no dedup).
pub fn load_csv(path: &Path) -> Result<DataSet> {
    let text = std::fs::read_to_string(path)?;
    let rows = parse_csv(&text)?;
    DataSet::new(rows)
}

#[derive(Deserialize)]
struct CandidateFile {
    centroids: Vec<Vec<f64>>,
}

/// Reads a centroid system from a JSON file with a `"centroids"` key;
/// extra keys are ignored, so result files feed straight back in.
pub fn read_candidate(path: &Path) -> Result<CentroidSystem> {
    let text = std::fs::read_to_string(path)?;
    let file: CandidateFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    CentroidSystem::new(file.centroids)
}

struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        // One leading digit plus 16 fractional digits: 17 significant.
        write!(writer, "{value:.16e}")
    }
}

/// Serializes a JSON value with every float at 17 significant digits,
/// followed by a newline.
pub fn to_json_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits);
    serde::Serialize::serialize(value, &mut ser).expect("in-memory serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_basic() {
        let rows = parse_csv("0,0\n1,0\n0,1\n").unwrap();
        assert_eq!(rows, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn csv_header_detected() {
        let rows = parse_csv("x,y\n0.5, 1.5\n").unwrap();
        assert_eq!(rows, vec![vec![0.5, 1.5]]);
    }

    #[test]
    fn csv_blank_lines_skipped() {
        let rows = parse_csv("\n1,2\n\n3,4\n").unwrap();
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn csv_rejects_garbage_mid_file() {
        assert!(parse_csv("1,2\nfoo,bar\n").is_err());
    }

    #[test]
    fn floats_carry_seventeen_digits() {
        let v = json!({ "objective": 1.0 / 6.0, "count": 3 });
        let s = to_json_string(&v);
        assert!(s.contains("1.6666666666666666e-1"), "{s}");
        assert!(s.contains("\"count\":3"), "{s}");
        // Round-trips to the identical bit pattern.
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["objective"].as_f64().unwrap(), 1.0 / 6.0);
    }

    #[test]
    fn serialization_is_deterministic() {
        let v = json!({ "centroids": [[0.5, 0.0], [0.5, 1.0]], "objective": 0.25 });
        assert_eq!(to_json_string(&v), to_json_string(&v));
    }
}
