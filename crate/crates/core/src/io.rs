//! JSON documents shared by the library and the command-line tool.
//!
//! Every document may carry a `"schema_version"` string; readers accept any
//! `1.x` and reject other majors. Floating-point values are written with 17
//! significant digits so that a write/read cycle is bit-exact.

use crate::body::{BodyError, InertiaSpec};
use crate::linalg::{Matrix, SkewMatrix, SymMatrix};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io;

pub const SCHEMA_VERSION: &str = "1.0";
const SCHEMA_MAJOR: &str = "1";

/// A schema violation, located by JSON path and (for syntax and type
/// errors) by line and column.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaError {
    pub path: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl SchemaError {
    pub fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            line: None,
            column: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "." } else { &self.path };
        write!(f, "field `{path}`")?;
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, " (line {l}, column {c})")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for SchemaError {}

/// Parses `text` into `T`, reporting the failing field path.
pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T, SchemaError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        SchemaError {
            path: if path == "." { String::new() } else { path },
            line: Some(inner.line()),
            column: Some(inner.column()),
            message: strip_location(inner.to_string()),
        }
    })?;
    Ok(value)
}

// serde_json appends " at line L column C"; the location is kept separately
fn strip_location(mut msg: String) -> String {
    if let Some(i) = msg.rfind(" at line ") {
        msg.truncate(i);
    }
    msg
}

pub(crate) fn check_version(version: &Option<String>, path: &str) -> Result<(), SchemaError> {
    if let Some(v) = version {
        let major = v.split('.').next().unwrap_or("");
        if major != SCHEMA_MAJOR {
            return Err(SchemaError::at(
                format!("{path}schema_version"),
                format!("unsupported schema version {v:?} (expected {SCHEMA_MAJOR}.x)"),
            ));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Sym,
    Skew,
    General,
}

/// `{"n": int, "kind": "sym"|"skew"|"general", "rows": [[…], …]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    pub n: usize,
    pub kind: MatrixKind,
    pub rows: Vec<Vec<f64>>,
}

impl MatrixDoc {
    pub fn from_skew(m: &SkewMatrix) -> Self {
        Self::new(m.as_matrix(), MatrixKind::Skew)
    }

    pub fn from_sym(m: &SymMatrix) -> Self {
        Self::new(m.as_matrix(), MatrixKind::Sym)
    }

    pub fn new(m: &Matrix, kind: MatrixKind) -> Self {
        Self {
            schema_version: Some(SCHEMA_VERSION.into()),
            n: m.nrows(),
            kind,
            rows: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
                .collect(),
        }
    }

    /// Validates shape and finiteness; `prefix` is the JSON path of this document.
    pub fn to_matrix(&self, prefix: &str) -> Result<Matrix, SchemaError> {
        check_version(&self.schema_version, prefix)?;
        if self.rows.len() != self.n {
            return Err(SchemaError::at(
                format!("{prefix}rows"),
                format!("expected {} rows, found {}", self.n, self.rows.len()),
            ));
        }
        let mut m = Matrix::zeros(self.n, self.n);
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.n {
                return Err(SchemaError::at(
                    format!("{prefix}rows[{i}]"),
                    format!("expected {} entries, found {}", self.n, row.len()),
                ));
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(SchemaError::at(
                        format!("{prefix}rows[{i}][{j}]"),
                        "entry is not finite",
                    ));
                }
                m[(i, j)] = *v;
            }
        }
        Ok(m)
    }

    pub fn to_skew(&self, prefix: &str) -> Result<SkewMatrix, SchemaError> {
        if self.kind != MatrixKind::Skew {
            return Err(SchemaError::at(format!("{prefix}kind"), "expected \"skew\""));
        }
        match SkewMatrix::from_matrix(self.to_matrix(prefix)?) {
            Ok(s) => Ok(s),
            Err(crate::linalg::LinalgError::Structure { row, col, a, b, .. }) => Err(SchemaError::at(
                format!("{prefix}rows[{col}][{row}]"),
                format!("skew partner of rows[{row}][{col}] = {a} must be {}, found {b}", -a),
            )),
            Err(e) => Err(SchemaError::at(format!("{prefix}rows"), e.to_string())),
        }
    }

    pub fn to_sym(&self, prefix: &str) -> Result<SymMatrix, SchemaError> {
        if self.kind != MatrixKind::Sym {
            return Err(SchemaError::at(format!("{prefix}kind"), "expected \"sym\""));
        }
        match SymMatrix::from_matrix(self.to_matrix(prefix)?) {
            Ok(s) => Ok(s),
            Err(crate::linalg::LinalgError::Structure { row, col, a, b, .. }) => Err(SchemaError::at(
                format!("{prefix}rows[{col}][{row}]"),
                format!("symmetric partner of rows[{row}][{col}] = {a} differs: {b}"),
            )),
            Err(e) => Err(SchemaError::at(format!("{prefix}rows"), e.to_string())),
        }
    }
}

/// Skew matrix from rows, for embedded structures.
pub fn skew_from_rows(rows: &[Vec<f64>]) -> Result<SkewMatrix, SchemaError> {
    MatrixDoc {
        schema_version: None,
        n: rows.len(),
        kind: MatrixKind::Skew,
        rows: rows.to_vec(),
    }
    .to_skew("")
}

/// A body given either as eigenvalues (diagonal J) or as a full symmetric matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
}

#[derive(Debug)]
pub enum BodyDocError {
    Schema(SchemaError),
    Body(BodyError),
}

impl fmt::Display for BodyDocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Schema(e) => e.fmt(f),
            Self::Body(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for BodyDocError {}

impl BodyDoc {
    pub fn from_eigenvalues(eigenvalues: &[f64]) -> Self {
        Self {
            schema_version: Some(SCHEMA_VERSION.into()),
            eigenvalues: Some(eigenvalues.to_vec()),
            matrix: None,
            gap_tol: None,
        }
    }

    pub fn resolve(&self, prefix: &str) -> Result<InertiaSpec, BodyDocError> {
        check_version(&self.schema_version, prefix).map_err(BodyDocError::Schema)?;
        let j = match (&self.eigenvalues, &self.matrix) {
            (Some(ev), None) => {
                if let Some(i) = ev.iter().position(|v| !v.is_finite()) {
                    return Err(BodyDocError::Schema(SchemaError::at(
                        format!("{prefix}eigenvalues[{i}]"),
                        "entry is not finite",
                    )));
                }
                SymMatrix::from_diagonal(ev)
            }
            (None, Some(m)) => m.to_sym(&format!("{prefix}matrix.")).map_err(BodyDocError::Schema)?,
            _ => {
                return Err(BodyDocError::Schema(SchemaError::at(
                    prefix.trim_end_matches('.'),
                    "exactly one of `eigenvalues` or `matrix` is required",
                )))
            }
        };
        let gap_tol = self.gap_tol.unwrap_or(crate::body::DEFAULT_GAP_TOL);
        InertiaSpec::with_gap_tol(j, gap_tol).map_err(BodyDocError::Body)
    }
}

/// Formats floats with 17 significant digits; layout from the wrapped formatter.
struct Digits17<F> {
    inner: F,
}

macro_rules! delegate {
    ($($name:ident ( $($arg:ident : $ty:ty),* );)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.inner.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl<F: serde_json::ser::Formatter> serde_json::ser::Formatter for Digits17<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

fn write_with<T: Serialize + ?Sized, F: serde_json::ser::Formatter>(value: &T, inner: F) -> Vec<u8> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17 { inner });
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    buf
}

/// Serializes with 17-significant-digit floats, pretty-printed, trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = write_with(value, serde_json::ser::PrettyFormatter::new());
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// Single-line variant of [`to_json_string`], without the newline.
pub fn to_json_line<T: Serialize + ?Sized>(value: &T) -> String {
    String::from_utf8(write_with(value, serde_json::ser::CompactFormatter)).expect("serde_json writes UTF-8")
}
