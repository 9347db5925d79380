//! JSON interchange for frames, matrices and vectors.
//!
//! Complex numbers are written as interleaved `re, im` float pairs:
//!
//! ```text
//! frame:  {"version":1,"dim":n,"vectors":[[re,im,...],...]}
//! matrix: {"version":1,"rows":r,"cols":c,"entries":[re,im,...]}   (row-major)
//! vector: {"version":1,"dim":n,"entries":[re,im,...]}
//! ```
//!
//! Canonical output is compact JSON on one line terminated by `\n`, with
//! floats in shortest round-trip form. Matrices and vectors may also be read
//! from comma-separated real values.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::numerics::{Complex64, ComplexMatrix, ComplexVector};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameFile {
    version: u32,
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    version: u32,
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorFile {
    version: u32,
    dim: usize,
    entries: Vec<f64>,
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

fn check_version(version: u32) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::parse(format!(
            "unsupported format version {version}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

fn pairs_to_complex(values: &[f64]) -> Vec<Complex64> {
    values
        .chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect()
}

fn interleave(values: &[Complex64]) -> Vec<f64> {
    values.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn canonical<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

pub fn parse_frame(text: &str) -> Result<Frame> {
    let file: FrameFile = serde_json::from_str(text)?;
    check_version(file.version)?;
    if file.dim == 0 {
        return Err(Error::parse("frame dimension must be positive"));
    }
    if file.vectors.is_empty() {
        return Err(Error::parse("frame must contain at least one vector"));
    }
    let vectors = file
        .vectors
        .iter()
        .enumerate()
        .map(|(k, row)| {
            if row.len() != 2 * file.dim {
                return Err(Error::DimensionMismatch(format!(
                    "vector {k} has {} values, expected {} for dimension {}",
                    row.len(),
                    2 * file.dim,
                    file.dim
                )));
            }
            ComplexVector::new(pairs_to_complex(row))
        })
        .collect::<Result<Vec<_>>>()?;
    Frame::new(vectors)
}

pub fn serialize_frame(frame: &Frame) -> String {
    canonical(&FrameFile {
        version: FORMAT_VERSION,
        dim: frame.space_dim(),
        vectors: frame
            .vectors()
            .iter()
            .map(|v| interleave(v.as_slice()))
            .collect(),
    })
}

/// Reads a matrix from JSON, or from CSV rows of real numbers.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    if !is_json(text) {
        return parse_real_csv(text);
    }
    let file: MatrixFile = serde_json::from_str(text)?;
    check_version(file.version)?;
    if file.rows == 0 || file.cols == 0 {
        return Err(Error::parse("matrix dimensions must be positive"));
    }
    if file.entries.len() != 2 * file.rows * file.cols {
        return Err(Error::DimensionMismatch(format!(
            "{} values for a {}x{} complex matrix, expected {}",
            file.entries.len(),
            file.rows,
            file.cols,
            2 * file.rows * file.cols
        )));
    }
    ComplexMatrix::new(file.rows, file.cols, pairs_to_complex(&file.entries))
}

pub fn serialize_matrix(m: &ComplexMatrix) -> String {
    canonical(&MatrixFile {
        version: FORMAT_VERSION,
        rows: m.rows(),
        cols: m.cols(),
        entries: interleave(m.as_slice()),
    })
}

/// Reads a vector from JSON, or from CSV holding a single row or column.
pub fn parse_vector(text: &str) -> Result<ComplexVector> {
    if !is_json(text) {
        let m = parse_real_csv(text)?;
        if m.rows() != 1 && m.cols() != 1 {
            return Err(Error::parse(format!(
                "a vector must be a single CSV row or column, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        return ComplexVector::new(m.as_slice().to_vec());
    }
    let file: VectorFile = serde_json::from_str(text)?;
    check_version(file.version)?;
    if file.dim == 0 {
        return Err(Error::parse("vector dimension must be positive"));
    }
    if file.entries.len() != 2 * file.dim {
        return Err(Error::DimensionMismatch(format!(
            "{} values for a complex vector of dimension {}",
            file.entries.len(),
            file.dim
        )));
    }
    ComplexVector::new(pairs_to_complex(&file.entries))
}

pub fn serialize_vector(v: &ComplexVector) -> String {
    canonical(&VectorFile {
        version: FORMAT_VERSION,
        dim: v.dim(),
        entries: interleave(v.as_slice()),
    })
}

/// Serializes a vector as a nested vector-file object.
pub fn serialize_vector_object<S: Serializer>(
    v: &ComplexVector,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    VectorFile {
        version: FORMAT_VERSION,
        dim: v.dim(),
        entries: interleave(v.as_slice()),
    }
    .serialize(serializer)
}

/// Serializes a matrix as a nested matrix-file object.
pub fn serialize_matrix_object<S: Serializer>(
    m: &ComplexMatrix,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    MatrixFile {
        version: FORMAT_VERSION,
        rows: m.rows(),
        cols: m.cols(),
        entries: interleave(m.as_slice()),
    }
    .serialize(serializer)
}

fn parse_real_csv(text: &str) -> Result<ComplexMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::Parse {
                line,
                column: 0,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field
                    .parse::<f64>()
                    .map(|x| Complex64::new(x, 0.0))
                    .map_err(|_| Error::Parse {
                        line,
                        column: col + 1,
                        message: format!("invalid number {field:?}"),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    line,
                    column: 0,
                    message: format!(
                        "ragged CSV: row has {} fields, expected {}",
                        row.len(),
                        first.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse("CSV input contains no rows"));
    }
    ComplexMatrix::from_rows(&rows)
}
