//! On-disk matrix formats.
//!
//! JSON is canonical: `{"rows": r, "cols": c, "data": [[[re, im], ...], ...]}`
//! with `null` marking unspecified entries of a partial matrix. Floats are
//! written in the shortest decimal form that parses back to the same bits.
//! CSV (one row per record, entries like `1+2i`, `-i`, `0.5`, empty for
//! unspecified) is accepted on input only.

use std::io::Read;
use std::path::Path;

use schurlab::{ComplexMatrix, PartialMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Option<[f64; 2]>>>,
}

impl MatrixDocument {
    pub fn from_matrix(a: &ComplexMatrix) -> Self {
        Self {
            rows: a.rows(),
            cols: a.cols(),
            data: a
                .to_rows()
                .into_iter()
                .map(|row| row.into_iter().map(|z| Some([z.re, z.im])).collect())
                .collect(),
        }
    }

    pub fn from_partial(p: &PartialMatrix) -> Self {
        let n = p.n();
        Self {
            rows: n,
            cols: n,
            data: (0..n)
                .map(|i| (0..n).map(|j| p.get(i, j).map(|z| [z.re, z.im])).collect())
                .collect(),
        }
    }

    fn validate_shape(&self) -> Result<(), CliError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(CliError::Input(format!(
                "matrix must have positive dimensions, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.data.len() != self.rows {
            return Err(CliError::Input(format!(
                "declared {} rows but data has {}",
                self.rows,
                self.data.len()
            )));
        }
        if let Some((i, row)) = self.data.iter().enumerate().find(|(_, row)| row.len() != self.cols) {
            return Err(CliError::Input(format!(
                "row {} has {} entries, expected {}",
                i + 1,
                row.len(),
                self.cols
            )));
        }
        Ok(())
    }

    /// Every entry must be present.
    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        self.validate_shape()?;
        let mut values = Vec::with_capacity(self.rows * self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let [re, im] = entry.ok_or_else(|| {
                    CliError::Input(format!("entry ({}, {}) is null in a complete matrix", i + 1, j + 1))
                })?;
                values.push(C64::new(re, im));
            }
        }
        Ok(ComplexMatrix::from_row_major(self.rows, self.cols, values)?)
    }

    pub fn to_partial(&self) -> Result<PartialMatrix, CliError> {
        self.validate_shape()?;
        if self.rows != self.cols {
            return Err(CliError::Input(format!(
                "partial matrix must be square, got {}x{}",
                self.rows, self.cols
            )));
        }
        let entries = self
            .data
            .iter()
            .flatten()
            .map(|e| e.map(|[re, im]| C64::new(re, im)))
            .collect();
        Ok(PartialMatrix::new(self.rows, entries)?)
    }

    /// Canonical compact JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite floats always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: Self = serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid matrix JSON: {e}")))?;
        doc.validate_shape()?;
        Ok(doc)
    }

    /// Rows of `re+imi` cells; empty or `null` cells are unspecified.
    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut data = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| CliError::Input(format!("invalid CSV: {e}")))?;
            let row = record
                .iter()
                .enumerate()
                .map(|(j, cell)| {
                    parse_complex_cell(cell)
                        .map(|z| z.map(|z| [z.re, z.im]))
                        .ok_or_else(|| CliError::Input(format!("cannot parse entry ({}, {}): {cell:?}", i + 1, j + 1)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            data.push(row);
        }
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        let doc = Self { rows, cols, data };
        doc.validate_shape()?;
        Ok(doc)
    }

    /// Reads a document from `path`, or from stdin when `path` is `-`.
    /// Files ending in `.csv` use the CSV reader.
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?
        };
        let is_csv = path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
        if is_csv {
            Self::from_csv(&text)
        } else {
            Self::from_json(&text)
        }
    }
}

/// Parses `a+bi`, `a-bi`, `bi`, `i`, `-i`, `a`; `""` and `null` are `None`.
/// Returns `None` on the outer option for malformed input.
fn parse_complex_cell(cell: &str) -> Option<Option<C64>> {
    let s: String = cell.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() || s.eq_ignore_ascii_case("null") {
        return Some(None);
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(|re| Some(C64::new(re, 0.0)));
    };
    // The split point is the last sign that does not start an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().ok()?, imaginary_part(&body[k..])?),
        None => (0.0, imaginary_part(body)?),
    };
    (re.is_finite() && im.is_finite()).then_some(Some(C64::new(re, im)))
}

fn imaginary_part(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complex_cells() {
        let cases = [
            ("1+2i", C64::new(1.0, 2.0)),
            ("-0.5-1.5i", C64::new(-0.5, -1.5)),
            ("i", C64::new(0.0, 1.0)),
            ("-i", C64::new(0.0, -1.0)),
            ("3", C64::new(3.0, 0.0)),
            ("2.5i", C64::new(0.0, 2.5)),
            ("1e-3+1e+2i", C64::new(1e-3, 1e2)),
            ("1 - i", C64::new(1.0, -1.0)),
            ("-1E-2-i", C64::new(-1e-2, -1.0)),
        ];
        for (text, want) in cases {
            assert_eq!(parse_complex_cell(text), Some(Some(want)), "{text}");
        }
        assert_eq!(parse_complex_cell(""), Some(None));
        assert_eq!(parse_complex_cell("null"), Some(None));
        assert_eq!(parse_complex_cell("abc"), None);
        assert_eq!(parse_complex_cell("1+xi"), None);
        assert_eq!(parse_complex_cell("inf"), None);
    }

    #[test]
    fn csv_and_json_agree() {
        let csv = "1, i\n-i, 1\n";
        let json = r#"{"rows":2,"cols":2,"data":[[[1.0,0.0],[0.0,1.0]],[[0.0,-1.0],[1.0,0.0]]]}"#;
        let a = MatrixDocument::from_csv(csv).unwrap().to_matrix().unwrap();
        let b = MatrixDocument::from_json(json).unwrap().to_matrix().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn canonical_json_round_trips_bits() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| {
            C64::new(
                1.0 / (i as f64 + 3.0) + j as f64 * 1e-300,
                -(0.1f64 * (i * j) as f64).exp(),
            )
        });
        let doc = MatrixDocument::from_matrix(&a);
        let back = MatrixDocument::from_json(&doc.to_json()).unwrap().to_matrix().unwrap();
        for (x, y) in a.as_slice().iter().zip(back.as_slice()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        assert_eq!(
            MatrixDocument::from_matrix(&ComplexMatrix::identity(1)).to_json(),
            r#"{"rows":1,"cols":1,"data":[[[1.0,0.0]]]}"#
        );
    }

    #[test]
    fn shape_errors() {
        assert!(MatrixDocument::from_json(r#"{"rows":2,"cols":1,"data":[[[1,0]]]}"#).is_err());
        assert!(MatrixDocument::from_json(r#"{"rows":1,"cols":2,"data":[[[1,0]]]}"#).is_err());
        assert!(MatrixDocument::from_json(r#"{"rows":0,"cols":0,"data":[]}"#).is_err());
        assert!(MatrixDocument::from_json(r#"{"rows":1,"cols":1,"data":[[[1,0,0]]]}"#).is_err());
        assert!(MatrixDocument::from_csv("1,2\n3\n").is_err());
        let partial = MatrixDocument::from_json(r#"{"rows":1,"cols":1,"data":[[null]]}"#).unwrap();
        assert!(partial.to_matrix().is_err());
        assert_eq!(partial.to_partial().unwrap().specified().count(), 0);
    }
}
