//! Dictionary representation of sparse structured matrices.
//!
//! A *dictionary* describes a matrix as a short list of *data items*: each
//! item carries one complex value together with an injective map from a set
//! of columns to rows, i.e. "value `A_l` appears at `(c_l(j), j)` for every
//! column `j` the item covers".  Matrices with repeated-value structure
//! (stencils, circulants, banded operators) compress from `O(nnz)` triplets
//! to a handful of items, and the block-encoding synthesis stage consumes
//! exactly this form.
//!
//! Two variants live here:
//!
//! * [`Dictionary`] — general matrices; per item the column→row map must be
//!   injective, and distinct items never overlap on a coordinate.
//! * [`HermitianDictionary`] — symmetric matrices with strictly positive
//!   entries; items map columns to rows without a per-item injectivity
//!   requirement, but for any fixed column all items hit distinct rows, and
//!   the item count must not exceed the matrix dimension.  This is the shape
//!   consumed by the self-adjoint encoding route.
//!
//! [`validate`] diagnoses a dictionary against a matrix and reports every
//! violation as data rather than failing fast, which keeps it usable as a
//! debugging tool for hand-written dictionaries.

mod build;

pub use build::{build_dictionary, build_dictionary_with, hermitianize, MatchingStrategy};

use crate::numerics::Complex64;
use crate::sparse::{SparseError, SparseMatrix, Triplet};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("invalid dictionary: {0}")]
    Invalid(String),
    #[error("dictionary has no items")]
    Empty,
    #[error("items overlap at row {row}, column {col}")]
    Overlap { row: usize, col: usize },
    #[error("matrix entry at row {row}, column {col} is not strictly positive real")]
    NonPositiveEntry { row: usize, col: usize },
    #[error("matrix is not symmetric: entry at row {row}, column {col} has no equal mirror")]
    NotSymmetric { row: usize, col: usize },
    #[error("{required} items needed, but a dimension-{available} matrix admits at most {available}")]
    CapacityExceeded { required: usize, available: usize },
    #[error("matrix has no nonzero entries")]
    EmptyMatrix,
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Sparse(#[from] SparseError),
}

pub type Result<T> = std::result::Result<T, DictionaryError>;

/// One dictionary entry: a value and the set of `(column, row)` coordinates
/// (stored as a column→row map) where it appears.
#[derive(Debug, Clone, PartialEq)]
pub struct DataItem {
    value: Complex64,
    /// `(column, row)` pairs sorted by column; each column appears once.
    map: Vec<(usize, usize)>,
}

impl DataItem {
    /// Builds an item from `(column, row)` pairs.  Pairs are sorted by
    /// column; a repeated column is an error since the map must be a
    /// function of the column.
    pub fn new(value: Complex64, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(DictionaryError::Invalid("item covers no columns".to_string()));
        }
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(DictionaryError::Invalid(format!(
                    "column {} mapped twice within one item",
                    w[0].0
                )));
            }
        }
        Ok(DataItem { value, map: pairs })
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    /// `(column, row)` pairs sorted by column.
    pub fn map(&self) -> &[(usize, usize)] {
        &self.map
    }

    /// Row this item writes in the given column, if covered.
    pub fn row_for(&self, col: usize) -> Option<usize> {
        self.map
            .binary_search_by_key(&col, |&(c, _)| c)
            .ok()
            .map(|k| self.map[k].1)
    }

    /// Number of columns covered.
    pub fn support_size(&self) -> usize {
        self.map.len()
    }

    /// Smallest `(column, row)` pair; used for deterministic item ordering.
    pub(crate) fn first_coordinate(&self) -> (usize, usize) {
        self.map[0]
    }
}

/// A single structural or consistency defect found by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Two columns of one item map to the same row.
    InjectivityClash { item: usize, row: usize, col_a: usize, col_b: usize },
    /// Two items both claim the same coordinate.
    OverlapBetweenItems { item_a: usize, item_b: usize, row: usize, col: usize },
    /// Coordinate outside the matrix.
    CoordinateOutOfRange { item: usize, row: usize, col: usize },
    /// Item value is zero or not finite.
    BadValue { item: usize },
    /// Matrix nonzero not covered by any item.
    MissingEntry { row: usize, col: usize },
    /// Item covers a coordinate where the matrix holds a structural zero.
    SpuriousEntry { item: usize, row: usize, col: usize },
    /// Item value disagrees with the matrix entry beyond the tolerance.
    ValueMismatch { item: usize, row: usize, col: usize, expected: Complex64, found: Complex64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InjectivityClash { item, row, col_a, col_b } => write!(
                f,
                "item {item}: columns {col_a} and {col_b} both map to row {row}"
            ),
            Violation::OverlapBetweenItems { item_a, item_b, row, col } => write!(
                f,
                "items {item_a} and {item_b} overlap at row {row}, column {col}"
            ),
            Violation::CoordinateOutOfRange { item, row, col } => {
                write!(f, "item {item}: coordinate ({row}, {col}) out of range")
            }
            Violation::BadValue { item } => write!(f, "item {item}: zero or non-finite value"),
            Violation::MissingEntry { row, col } => {
                write!(f, "matrix entry at ({row}, {col}) covered by no item")
            }
            Violation::SpuriousEntry { item, row, col } => {
                write!(f, "item {item} covers ({row}, {col}) where the matrix is zero")
            }
            Violation::ValueMismatch { item, row, col, expected, found } => write!(
                f,
                "item {item} at ({row}, {col}): dictionary value {found} vs matrix value {expected}"
            ),
        }
    }
}

/// Outcome of [`validate`]: an empty violation list means the dictionary is
/// structurally sound and represents the matrix exactly.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            writeln!(f, "dictionary is consistent with the matrix")
        } else {
            writeln!(f, "{} violation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
            Ok(())
        }
    }
}

/// Serialised shape shared by both dictionary flavours:
/// `{"n": 3, "items": [{"value": [re, im], "map": [[col, row], ...]}, ...]}`.
#[derive(Serialize, Deserialize)]
struct DictionaryDto {
    n: u32,
    items: Vec<ItemDto>,
}

#[derive(Serialize, Deserialize)]
struct ItemDto {
    value: [f64; 2],
    map: Vec<[u64; 2]>,
}

fn items_to_dto(n: u32, items: &[DataItem]) -> DictionaryDto {
    DictionaryDto {
        n,
        items: items
            .iter()
            .map(|it| ItemDto {
                value: [it.value.re, it.value.im],
                map: it.map.iter().map(|&(c, r)| [c as u64, r as u64]).collect(),
            })
            .collect(),
    }
}

fn items_from_dto(dto: &DictionaryDto) -> Result<(u32, Vec<DataItem>)> {
    let items = dto
        .items
        .iter()
        .map(|it| {
            DataItem::new(
                Complex64::new(it.value[0], it.value[1]),
                it.map.iter().map(|p| (p[0] as usize, p[1] as usize)).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((dto.n, items))
}

/// Dictionary for a general matrix on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    n: u32,
    items: Vec<DataItem>,
}

impl Dictionary {
    /// Validating constructor: enforces in-range coordinates, finite nonzero
    /// values, per-item injectivity and pairwise coordinate disjointness.
    pub fn new(n: u32, items: Vec<DataItem>) -> Result<Self> {
        if items.is_empty() {
            return Err(DictionaryError::Empty);
        }
        let d = Dictionary { n, items };
        let violations = d.structural_violations(true);
        if let Some(first) = violations.first() {
            return Err(DictionaryError::Invalid(format!(
                "{first} ({} violation(s) total)",
                violations.len()
            )));
        }
        Ok(d)
    }

    /// Non-validating constructor for diagnostics and tests; pair with
    /// [`validate`] to inspect the damage.
    pub fn from_parts(n: u32, items: Vec<DataItem>) -> Self {
        Dictionary { n, items }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn items(&self) -> &[DataItem] {
        &self.items
    }

    /// Number of items `s₀`.
    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    /// Total number of coordinates covered (the matrix nonzero count `s`).
    pub fn coordinate_count(&self) -> usize {
        self.items.iter().map(|it| it.support_size()).sum()
    }

    /// Index-register width `m = ⌈log₂ s₀⌉` needed to address the items.
    pub fn index_bits(&self) -> u32 {
        bits_for_count(self.item_count())
    }

    /// Subnormalization `α = Σ_l |A_l|`, accumulated in item order.
    pub fn subnormalization(&self) -> f64 {
        self.items.iter().map(|it| it.value.norm()).sum()
    }

    /// Expands the dictionary back into a sparse matrix.  Overlapping items
    /// surface as [`DictionaryError::Overlap`].
    pub fn to_matrix(&self) -> Result<SparseMatrix> {
        expand_items(self.n, &self.items)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&items_to_dto(self.n, &self.items))
            .expect("dictionary serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: DictionaryDto = serde_json::from_str(text)?;
        let (n, items) = items_from_dto(&dto)?;
        Dictionary::new(n, items)
    }

    /// Structural checks shared by the constructor and [`validate`].
    fn structural_violations(&self, check_injectivity: bool) -> Vec<Violation> {
        shared_structural_violations(self.n, &self.items, check_injectivity)
    }
}

/// Dictionary for a symmetric matrix with strictly positive entries.
///
/// Compared with [`Dictionary`], the per-item map may repeat rows across
/// different columns, but for a fixed column all items must hit distinct
/// rows, the item count is bounded by the dimension, and the covered
/// coordinate set must be symmetric with matching values.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianDictionary {
    n: u32,
    items: Vec<DataItem>,
}

impl HermitianDictionary {
    pub fn new(n: u32, items: Vec<DataItem>) -> Result<Self> {
        if items.is_empty() {
            return Err(DictionaryError::Empty);
        }
        let dim = 1usize << n;
        if items.len() > dim {
            return Err(DictionaryError::CapacityExceeded {
                required: items.len(),
                available: dim,
            });
        }
        // No per-item injectivity here; overlap (which covers the fixed-column
        // distinct-rows rule) and ranges are still enforced.
        let violations = shared_structural_violations(n, &items, false);
        if let Some(first) = violations.first() {
            return Err(DictionaryError::Invalid(format!(
                "{first} ({} violation(s) total)",
                violations.len()
            )));
        }
        for (idx, it) in items.iter().enumerate() {
            if it.value.im != 0.0 || it.value.re <= 0.0 {
                return Err(DictionaryError::Invalid(format!(
                    "item {idx}: value {} is not strictly positive real",
                    it.value
                )));
            }
        }
        // The union of coordinates must be symmetric with equal values.
        let mut coords: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for it in &items {
            for &(col, row) in it.map() {
                coords.insert((row, col), it.value);
            }
        }
        for (&(row, col), &value) in &coords {
            match coords.get(&(col, row)) {
                Some(&mirror) if mirror == value => {}
                _ => return Err(DictionaryError::NotSymmetric { row, col }),
            }
        }
        Ok(HermitianDictionary { n, items })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn items(&self) -> &[DataItem] {
        &self.items
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn coordinate_count(&self) -> usize {
        self.items.iter().map(|it| it.support_size()).sum()
    }

    pub fn index_bits(&self) -> u32 {
        bits_for_count(self.item_count())
    }

    /// Subnormalization `α = Σ_l A_l` (values are positive reals).
    pub fn subnormalization(&self) -> f64 {
        self.items.iter().map(|it| it.value.re).sum()
    }

    pub fn to_matrix(&self) -> Result<SparseMatrix> {
        expand_items(self.n, &self.items)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&items_to_dto(self.n, &self.items))
            .expect("dictionary serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: DictionaryDto = serde_json::from_str(text)?;
        let (n, items) = items_from_dto(&dto)?;
        HermitianDictionary::new(n, items)
    }
}

fn bits_for_count(count: usize) -> u32 {
    let mut bits = 0u32;
    while (1usize << bits) < count {
        bits += 1;
    }
    bits
}

fn expand_items(n: u32, items: &[DataItem]) -> Result<SparseMatrix> {
    let mut triplets = Vec::new();
    let mut seen = BTreeMap::new();
    for (idx, it) in items.iter().enumerate() {
        for &(col, row) in it.map() {
            if seen.insert((row, col), idx).is_some() {
                return Err(DictionaryError::Overlap { row, col });
            }
            triplets.push(Triplet { row, col, value: it.value() });
        }
    }
    Ok(SparseMatrix::new(n, triplets)?)
}

fn shared_structural_violations(
    n: u32,
    items: &[DataItem],
    check_injectivity: bool,
) -> Vec<Violation> {
    let dim = 1usize << n;
    let mut violations = Vec::new();
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (idx, it) in items.iter().enumerate() {
        if it.value == Complex64::new(0.0, 0.0)
            || !it.value.re.is_finite()
            || !it.value.im.is_finite()
        {
            violations.push(Violation::BadValue { item: idx });
        }
        let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
        for &(col, row) in it.map() {
            if row >= dim || col >= dim {
                violations.push(Violation::CoordinateOutOfRange { item: idx, row, col });
                continue;
            }
            if check_injectivity {
                if let Some(&other_col) = rows.get(&row) {
                    violations.push(Violation::InjectivityClash {
                        item: idx,
                        row,
                        col_a: other_col,
                        col_b: col,
                    });
                } else {
                    rows.insert(row, col);
                }
            }
            if let Some(&owner_idx) = owner.get(&(row, col)) {
                violations.push(Violation::OverlapBetweenItems {
                    item_a: owner_idx,
                    item_b: idx,
                    row,
                    col,
                });
            } else {
                owner.insert((row, col), idx);
            }
        }
    }
    violations
}

/// Checks a dictionary against a matrix and reports every defect found:
/// structural problems, uncovered matrix entries, coverage of structural
/// zeros, and value disagreements beyond `value_tol`.
pub fn validate(d: &Dictionary, a: &SparseMatrix, value_tol: f64) -> ValidationReport {
    let mut violations = d.structural_violations(true);
    consistency_violations(&d.items, a, value_tol, &mut violations);
    ValidationReport { violations }
}

/// [`validate`] for the symmetric flavour (no per-item injectivity check).
pub fn validate_hermitian(
    d: &HermitianDictionary,
    a: &SparseMatrix,
    value_tol: f64,
) -> ValidationReport {
    let mut violations = shared_structural_violations(d.n, &d.items, false);
    consistency_violations(&d.items, a, value_tol, &mut violations);
    ValidationReport { violations }
}

fn consistency_violations(
    items: &[DataItem],
    a: &SparseMatrix,
    value_tol: f64,
    violations: &mut Vec<Violation>,
) {
    let dim = a.dim();
    let mut covered: BTreeMap<(usize, usize), (usize, Complex64)> = BTreeMap::new();
    for (idx, it) in items.iter().enumerate() {
        for &(col, row) in it.map() {
            if row >= dim || col >= dim {
                continue; // already reported as out-of-range
            }
            covered.entry((row, col)).or_insert((idx, it.value()));
            match a.value_at(row, col) {
                None => violations.push(Violation::SpuriousEntry { item: idx, row, col }),
                Some(expected) => {
                    if (expected - it.value()).norm() > value_tol {
                        violations.push(Violation::ValueMismatch {
                            item: idx,
                            row,
                            col,
                            expected,
                            found: it.value(),
                        });
                    }
                }
            }
        }
    }
    for t in a.triplets() {
        if !covered.contains_key(&(t.row, t.col)) {
            violations.push(Violation::MissingEntry { row: t.row, col: t.col });
        }
    }
}
