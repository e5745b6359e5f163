//! JSON and CSV interchange. Rationals are written as `"p"` or `"p/q"`.
//!
//! Complex schema: `{"dims": [l1, ...], "diffs": [[["p/q", ...], ...], ...]}`
//! with `diffs[i]` row-major of shape `l_i × l_{i+1}`.

use serde::{Deserialize, Serialize};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::rat::{parse_rat, Rat};
use crate::resultant::ResultantResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Json,
    Csv,
}

impl std::str::FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidInput(format!("unknown format '{other}'"))),
        }
    }
}

fn string_rows(m: &ExactMatrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(Rat::to_string).collect())
        .collect()
}

fn matrix_from_strings(rows: &[Vec<String>], shape: Option<(usize, usize)>) -> Result<ExactMatrix> {
    let parsed: Vec<Vec<Rat>> = rows
        .iter()
        .map(|row| row.iter().map(|cell| parse_rat(cell.trim())).collect())
        .collect::<Result<_>>()?;
    match shape {
        Some((r, c)) if parsed.is_empty() => Ok(ExactMatrix::zeros(r, c)),
        Some((r, c)) => {
            if parsed.len() != r {
                return Err(Error::DimensionMismatch { expected: r, got: parsed.len() });
            }
            if let Some(bad) = parsed.iter().find(|row| row.len() != c) {
                return Err(Error::DimensionMismatch { expected: c, got: bad.len() });
            }
            ExactMatrix::new(r, c, parsed.into_iter().flatten().collect())
        }
        None => ExactMatrix::from_rows(parsed),
    }
}

/// Writes one matrix. JSON is a bare array of rows of strings.
pub fn emit_matrix(m: &ExactMatrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Csv => {
            let mut out = String::new();
            for row in string_rows(m) {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        MatrixFormat::Json => serde_json::to_string(&string_rows(m)).expect("strings serialize"),
    }
}

pub fn parse_matrix_csv(text: &str) -> Result<ExactMatrix> {
    let rows: Vec<Vec<String>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    matrix_from_strings(&rows, None)
}

pub fn parse_matrix_json(text: &str) -> Result<ExactMatrix> {
    let rows: Vec<Vec<String>> =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("matrix JSON: {e}")))?;
    matrix_from_strings(&rows, None)
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    dims: Vec<usize>,
    diffs: Vec<Vec<Vec<String>>>,
}

pub fn complex_to_json(c: &ChainComplex) -> String {
    let doc = ComplexDoc {
        dims: c.dims().to_vec(),
        diffs: c.diffs().iter().map(string_rows).collect(),
    };
    serde_json::to_string(&doc).expect("strings serialize")
}

/// Reads a complex, checking shapes only. Nilpotency is left to the caller
/// so that a failing complex can still be reported on.
pub fn complex_from_json(text: &str) -> Result<ChainComplex> {
    let doc: ComplexDoc =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("complex JSON: {e}")))?;
    if doc.dims.is_empty() {
        return Err(Error::InvalidInput("complex has no terms".into()));
    }
    if doc.diffs.len() + 1 != doc.dims.len() {
        return Err(Error::DimensionMismatch {
            expected: doc.dims.len() - 1,
            got: doc.diffs.len(),
        });
    }
    let diffs = doc
        .diffs
        .iter()
        .enumerate()
        .map(|(i, rows)| matrix_from_strings(rows, Some((doc.dims[i], doc.dims[i + 1]))))
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::with_shapes(doc.dims, diffs)
}

#[derive(Serialize)]
struct ResultantDoc<'a> {
    value: String,
    sign_convention: &'a str,
    method: &'a str,
    #[serde(rename = "R")]
    big_r: Option<usize>,
    degree_expected: usize,
    selection: Option<Vec<Vec<usize>>>,
    degenerate: bool,
    degenerate_stage: Option<usize>,
    cohomology: Option<Vec<usize>>,
}

pub fn resultant_to_json(res: &ResultantResult) -> String {
    let doc = ResultantDoc {
        value: res.value.to_string(),
        sign_convention: "selection-dependent",
        method: res.method.as_str(),
        big_r: res.r_used,
        degree_expected: res.degree_expected,
        selection: res.selection.as_ref().map(|s| s.one_based()),
        degenerate: res.degeneracy.is_some(),
        degenerate_stage: res.degeneracy.as_ref().map(|d| d.stage),
        cohomology: res.degeneracy.as_ref().map(|d| d.cohomology.h.clone()),
    };
    serde_json::to_string(&doc).expect("strings serialize")
}
