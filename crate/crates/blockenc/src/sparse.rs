//! Sparse matrices in triplet form, sized to a power-of-two dimension.
//!
//! Every matrix handled by this crate acts on an `n`-qubit register, so the
//! dimension is always `2^n`; inputs of other sizes are zero-padded up to the
//! next power of two.  Storage is a sorted list of `(row, col, value)`
//! triplets with three hard invariants: coordinates in range, values finite
//! and nonzero, and no duplicate coordinates.
//!
//! File exchange uses the MatrixMarket coordinate format
//! (<https://math.nist.gov/MatrixMarket/formats.html>): `real`, `integer` and
//! `complex` fields are accepted, `general`, `symmetric` and `hermitian`
//! symmetries are expanded, and the writer emits a canonical `complex
//! general` file that round-trips bit-exactly through [`load_matrix_market`].

use crate::numerics::{Complex64, DenseMatrix};
use thiserror::Error;

/// Largest supported register size; keeps `2^n` comfortably inside `usize`.
pub const MAX_QUBITS: u32 = 32;

/// Default cap (in qubits) for [`SparseMatrix::to_dense`].
pub const DEFAULT_DENSE_CAP: u32 = 10;

#[derive(Debug, Error)]
pub enum SparseError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported MatrixMarket flavour: {message}")]
    Unsupported { message: String },
    #[error("duplicate entry at row {row}, column {col}")]
    Duplicate { row: usize, col: usize },
    #[error("matrix is {rows}x{cols}, but only square matrices are supported")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix on {n} qubits exceeds the dense conversion cap of {cap} qubits")]
    DenseCapExceeded { n: u32, cap: u32 },
    #[error("matrix would need {n} qubits, more than the supported maximum of {MAX_QUBITS}")]
    DimensionTooLarge { n: u32 },
    #[error("invalid entry at row {row}, column {col}: {message}")]
    BadTriplet { row: usize, col: usize, message: String },
}

pub type Result<T> = std::result::Result<T, SparseError>;

/// One stored nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub value: Complex64,
}

/// Square sparse matrix of dimension `2^n`, stored as sorted triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: u32,
    entries: Vec<Triplet>,
}

impl SparseMatrix {
    /// Builds a matrix on `n` qubits from arbitrary-order triplets.
    ///
    /// Rejects out-of-range coordinates, non-finite or exactly-zero values,
    /// and duplicate coordinates.  Entries are sorted by `(row, col)`.
    pub fn new(n: u32, triplets: Vec<Triplet>) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(SparseError::DimensionTooLarge { n });
        }
        let dim = 1usize << n;
        let mut entries = triplets;
        for t in &entries {
            if t.row >= dim || t.col >= dim {
                return Err(SparseError::BadTriplet {
                    row: t.row,
                    col: t.col,
                    message: format!("coordinate outside the {dim}x{dim} matrix"),
                });
            }
            if !t.value.re.is_finite() || !t.value.im.is_finite() {
                return Err(SparseError::BadTriplet {
                    row: t.row,
                    col: t.col,
                    message: "value is not finite".to_string(),
                });
            }
            if t.value == Complex64::new(0.0, 0.0) {
                return Err(SparseError::BadTriplet {
                    row: t.row,
                    col: t.col,
                    message: "explicit zero entries are not stored".to_string(),
                });
            }
        }
        entries.sort_by_key(|t| (t.row, t.col));
        for pair in entries.windows(2) {
            if pair[0].row == pair[1].row && pair[0].col == pair[1].col {
                return Err(SparseError::Duplicate { row: pair[0].row, col: pair[0].col });
            }
        }
        Ok(SparseMatrix { n, entries })
    }

    /// Number of qubits the matrix acts on.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Dimension `2^n`.
    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    /// Number of stored nonzeros.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Triplets sorted by `(row, col)`.
    pub fn triplets(&self) -> &[Triplet] {
        &self.entries
    }

    /// Value at `(row, col)`, or `None` for a structural zero.
    pub fn value_at(&self, row: usize, col: usize) -> Option<Complex64> {
        self.entries
            .binary_search_by_key(&(row, col), |t| (t.row, t.col))
            .ok()
            .map(|k| self.entries[k].value)
    }

    /// Frobenius norm `sqrt(Σ |a_ij|²)`, accumulated in storage order
    /// (ascending `(row, col)`).  Callers that must match this value exactly
    /// should call this method rather than re-deriving it.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|t| t.value.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest number of nonzeros in any single column.
    pub fn max_nonzeros_per_column(&self) -> usize {
        let mut counts = vec![0usize; self.dim()];
        for t in &self.entries {
            counts[t.col] += 1;
        }
        counts.into_iter().max().unwrap_or(0)
    }

    /// Largest number of nonzeros in any single row.
    pub fn max_nonzeros_per_row(&self) -> usize {
        let mut counts = vec![0usize; self.dim()];
        for t in &self.entries {
            counts[t.row] += 1;
        }
        counts.into_iter().max().unwrap_or(0)
    }

    /// Dense form; refuses matrices larger than `2^cap` to keep memory in
    /// check (see [`DEFAULT_DENSE_CAP`]).
    pub fn to_dense(&self, cap: u32) -> Result<DenseMatrix> {
        if self.n > cap {
            return Err(SparseError::DenseCapExceeded { n: self.n, cap });
        }
        let dim = self.dim();
        let mut m = DenseMatrix::zeros((dim, dim));
        for t in &self.entries {
            m[(t.row, t.col)] = t.value;
        }
        Ok(m)
    }

    /// Converts a dense square matrix, padding the dimension up to the next
    /// power of two and dropping exact zeros.
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        let (rows, cols) = m.dim();
        if rows != cols {
            return Err(SparseError::NotSquare { rows, cols });
        }
        let n = qubits_for_dim(rows.max(1))?;
        let triplets = m
            .indexed_iter()
            .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            .map(|((row, col), value)| Triplet { row, col, value: *value })
            .collect();
        SparseMatrix::new(n, triplets)
    }
}

/// Smallest `n` with `2^n ≥ dim`.
pub fn qubits_for_dim(dim: usize) -> Result<u32> {
    let mut n = 0u32;
    while (1usize << n) < dim {
        n += 1;
        if n > MAX_QUBITS {
            return Err(SparseError::DimensionTooLarge { n });
        }
    }
    Ok(n)
}

/// Parses a MatrixMarket coordinate file.
///
/// Indices are converted from the file's 1-based convention to 0-based,
/// `symmetric`/`hermitian` storage is expanded to both triangles, explicit
/// zeros are dropped after duplicate detection, and the dimension is padded
/// to the next power of two.  All parse failures name the offending line.
pub fn load_matrix_market(text: &str) -> Result<SparseMatrix> {
    let mut lines = text.lines().enumerate();

    // Header: %%MatrixMarket matrix coordinate <field> <symmetry>
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| SparseError::Parse { line: 1, message: "empty input".to_string() })?;
    let header_no = header_line + 1;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 5 || !tokens[0].eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(SparseError::Parse {
            line: header_no,
            message: "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'".to_string(),
        });
    }
    if !tokens[1].eq_ignore_ascii_case("matrix") {
        return Err(SparseError::Unsupported {
            message: format!("object '{}' (only 'matrix' is supported)", tokens[1]),
        });
    }
    if !tokens[2].eq_ignore_ascii_case("coordinate") {
        return Err(SparseError::Unsupported {
            message: format!("format '{}' (only sparse 'coordinate' files are supported)", tokens[2]),
        });
    }
    #[derive(PartialEq, Clone, Copy)]
    enum Field {
        Real,
        Integer,
        Complex,
    }
    let field = match tokens[3].to_ascii_lowercase().as_str() {
        "real" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => {
            return Err(SparseError::Unsupported {
                message: format!("field '{other}' (pattern and other fields carry no values)"),
            })
        }
    };
    #[derive(PartialEq, Clone, Copy)]
    enum Symmetry {
        General,
        Symmetric,
        Hermitian,
    }
    let symmetry = match tokens[4].to_ascii_lowercase().as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        other => {
            return Err(SparseError::Unsupported {
                message: format!("symmetry '{other}' (general, symmetric, hermitian supported)"),
            })
        }
    };

    // Size line: first non-comment, non-blank line after the header.
    let mut size_line = None;
    for (idx, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        size_line = Some((idx + 1, line.to_string()));
        break;
    }
    let (size_no, size_text) = size_line.ok_or_else(|| SparseError::Parse {
        line: header_no,
        message: "missing size line".to_string(),
    })?;
    let size_tokens: Vec<&str> = size_text.split_whitespace().collect();
    if size_tokens.len() != 3 {
        return Err(SparseError::Parse {
            line: size_no,
            message: "size line must be '<rows> <cols> <nnz>'".to_string(),
        });
    }
    let parse_usize = |tok: &str, line: usize| -> Result<usize> {
        tok.parse::<usize>().map_err(|_| SparseError::Parse {
            line,
            message: format!("'{tok}' is not a non-negative integer"),
        })
    };
    let rows = parse_usize(size_tokens[0], size_no)?;
    let cols = parse_usize(size_tokens[1], size_no)?;
    let declared_nnz = parse_usize(size_tokens[2], size_no)?;
    if rows != cols {
        return Err(SparseError::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Err(SparseError::Parse {
            line: size_no,
            message: "matrix dimension must be at least 1".to_string(),
        });
    }
    let n = qubits_for_dim(rows)?;

    // Entry lines.
    let parse_f64 = |tok: &str, line: usize| -> Result<f64> {
        tok.parse::<f64>().map_err(|_| SparseError::Parse {
            line,
            message: format!("'{tok}' is not a number"),
        })
    };
    let mut raw_entries: Vec<(usize, usize, usize, Complex64)> = Vec::with_capacity(declared_nnz);
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if raw_entries.len() == declared_nnz {
            return Err(SparseError::Parse {
                line: line_no,
                message: format!("more than the declared {declared_nnz} entries"),
            });
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let expected = if field == Field::Complex { 4 } else { 3 };
        if toks.len() != expected {
            return Err(SparseError::Parse {
                line: line_no,
                message: format!("expected {expected} fields, found {}", toks.len()),
            });
        }
        let i = parse_usize(toks[0], line_no)?;
        let j = parse_usize(toks[1], line_no)?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(SparseError::Parse {
                line: line_no,
                message: format!("coordinate ({i}, {j}) outside the 1-based {rows}x{cols} range"),
            });
        }
        let value = match field {
            Field::Complex => {
                Complex64::new(parse_f64(toks[2], line_no)?, parse_f64(toks[3], line_no)?)
            }
            Field::Real | Field::Integer => Complex64::new(parse_f64(toks[2], line_no)?, 0.0),
        };
        if symmetry == Symmetry::Hermitian && i == j && value.im != 0.0 {
            return Err(SparseError::Parse {
                line: line_no,
                message: "hermitian file has a non-real diagonal entry".to_string(),
            });
        }
        raw_entries.push((line_no, i - 1, j - 1, value));
    }
    if raw_entries.len() != declared_nnz {
        return Err(SparseError::Parse {
            line: text.lines().count(),
            message: format!(
                "file ended after {} of the declared {declared_nnz} entries",
                raw_entries.len()
            ),
        });
    }

    // Expand symmetry, detect duplicates, then drop explicit zeros.
    let mut expanded: Vec<Triplet> = Vec::with_capacity(raw_entries.len() * 2);
    for &(_, i, j, value) in &raw_entries {
        expanded.push(Triplet { row: i, col: j, value });
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => expanded.push(Triplet { row: j, col: i, value }),
                Symmetry::Hermitian => {
                    expanded.push(Triplet { row: j, col: i, value: value.conj() })
                }
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for t in &expanded {
        if !seen.insert((t.row, t.col)) {
            return Err(SparseError::Duplicate { row: t.row, col: t.col });
        }
    }
    expanded.retain(|t| t.value != Complex64::new(0.0, 0.0));
    SparseMatrix::new(n, expanded)
}

/// Serialises a matrix as a canonical `complex general` MatrixMarket file.
///
/// The output is deterministic (entries in `(row, col)` order, shortest
/// round-trip float formatting) and [`load_matrix_market`] reconstructs the
/// exact same matrix from it.
pub fn write_matrix_market(a: &SparseMatrix) -> String {
    let dim = a.dim();
    let mut out = String::new();
    out.push_str("%%MatrixMarket matrix coordinate complex general\n");
    out.push_str(&format!("{dim} {dim} {}\n", a.nnz()));
    for t in a.triplets() {
        out.push_str(&format!("{} {} {} {}\n", t.row + 1, t.col + 1, t.value.re, t.value.im));
    }
    out
}
