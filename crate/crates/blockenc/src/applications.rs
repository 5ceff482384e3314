//! Generators for the worked application instances: a periodic tridiagonal
//! operator on a ring, a five-point 2-D grid Laplacian, and the sparse
//! matrix pair of a generalized eigenvalue problem arising from a
//! plate-vibration finite-element discretisation.
//!
//! Each generator returns both the sparse matrix and the dictionary that
//! produces it, with one dictionary item per structural family (a value
//! together with the column-indexed diagonal it occupies).  Items are built
//! from explicit index tables; a collision between two tables is reported as
//! an error naming both offending items.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::{DataItem, Dictionary, DictionaryError};
use crate::sparse::{qubits_for_dim, SparseError, SparseMatrix};

/// Errors from the application-instance generators.
#[derive(Debug, Error)]
pub enum ApplicationsError {
    /// A generator argument is outside its documented domain.
    #[error("parameter `{name}` is invalid: {message}")]
    BadParameter { name: &'static str, message: String },
    /// Two item index tables write the same matrix cell.
    #[error("items `{first}` and `{second}` both write row {row}, column {col}")]
    OverlappingItems { first: String, second: String, row: usize, col: usize },
    #[error(transparent)]
    Dictionary(#[from] DictionaryError),
    #[error(transparent)]
    Sparse(#[from] SparseError),
}

pub type Result<T> = std::result::Result<T, ApplicationsError>;

/// One labelled dictionary item under construction: a value and the
/// `(column, row)` cells it fills.
struct NamedItem {
    key: String,
    value: Complex64,
    pairs: Vec<(usize, usize)>,
}

impl NamedItem {
    fn new(key: &str, value: Complex64, pairs: Vec<(usize, usize)>) -> Self {
        NamedItem { key: key.to_string(), value, pairs }
    }

    /// Item whose row map is the constant shift `row = column + shift`,
    /// applied to every column produced by `cols`.
    fn shifted(key: &str, value: Complex64, shift: i64, cols: impl Iterator<Item = usize>) -> Self {
        let pairs = cols.map(|j| (j, (j as i64 + shift) as usize)).collect();
        NamedItem::new(key, value, pairs)
    }
}

/// Builds the dictionary and its matrix from labelled items, reporting any
/// cell written by two different items with both item names.
fn build_named_dictionary(n: u32, items: Vec<NamedItem>) -> Result<(SparseMatrix, Dictionary)> {
    let mut seen: std::collections::HashMap<(usize, usize), usize> = std::collections::HashMap::new();
    for (index, item) in items.iter().enumerate() {
        for &(col, row) in &item.pairs {
            if let Some(&previous) = seen.get(&(col, row)) {
                return Err(ApplicationsError::OverlappingItems {
                    first: items[previous].key.clone(),
                    second: item.key.clone(),
                    row,
                    col,
                });
            }
            seen.insert((col, row), index);
        }
    }
    let data = items
        .into_iter()
        .map(|item| DataItem::new(item.value, item.pairs))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let d = Dictionary::new(n, data)?;
    let a = d.to_matrix()?;
    Ok((a, d))
}

fn ensure_nonzero(name: &'static str, index: usize, value: Complex64) -> Result<()> {
    if value == Complex64::new(0.0, 0.0) {
        return Err(ApplicationsError::BadParameter {
            name,
            message: format!("coefficient {index} must be nonzero"),
        });
    }
    Ok(())
}

/// Periodic tridiagonal operator on a ring of `2^n` sites: `alphas[0]` on
/// the diagonal, `alphas[1]` one step below (wrapping), `alphas[2]` one step
/// above (wrapping).  Returns the matrix and its three-item dictionary.
///
/// Requires `n >= 2` and all three coefficients nonzero.
pub fn gen_cyclic_laplacian(
    n: u32,
    alphas: [Complex64; 3],
) -> Result<(SparseMatrix, Dictionary)> {
    if n < 2 {
        return Err(ApplicationsError::BadParameter {
            name: "n",
            message: format!("need at least 2 qubits, got {n}"),
        });
    }
    for (k, &alpha) in alphas.iter().enumerate() {
        ensure_nonzero("alphas", k, alpha)?;
    }
    let dim = 1usize << n;
    let items = vec![
        NamedItem::new("alpha1:diag", alphas[0], (0..dim).map(|j| (j, j)).collect()),
        NamedItem::new("alpha2:down", alphas[1], (0..dim).map(|j| (j, (j + 1) % dim)).collect()),
        NamedItem::new(
            "alpha3:up",
            alphas[2],
            (0..dim).map(|j| (j, (j + dim - 1) % dim)).collect(),
        ),
    ];
    build_named_dictionary(n, items)
}

/// Five-point Laplacian on an `nx` by `ny` grid (x fastest, Dirichlet
/// boundaries) with spacings `dx`, `dy`: `-2 (dx^-2 + dy^-2)` on the
/// diagonal, `dx^-2` on the in-row couplings and `dy^-2` on the
/// between-row couplings.  Returns the matrix and its five-item dictionary.
///
/// Requires `nx` and `ny` to be powers of two at least 2 (so the grid fills
/// the qubit register exactly) and positive spacings.
pub fn gen_laplacian2d(
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
) -> Result<(SparseMatrix, Dictionary)> {
    for (name, v) in [("nx", nx), ("ny", ny)] {
        if v < 2 || !v.is_power_of_two() {
            return Err(ApplicationsError::BadParameter {
                name,
                message: format!("grid side must be a power of two at least 2, got {v}"),
            });
        }
    }
    for (name, v) in [("dx", dx), ("dy", dy)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(ApplicationsError::BadParameter {
                name,
                message: format!("grid spacing must be positive and finite, got {v}"),
            });
        }
    }
    let total = nx * ny;
    let n = qubits_for_dim(total)?;
    let ax = 1.0 / (dx * dx);
    let ay = 1.0 / (dy * dy);
    let a0 = Complex64::new(-2.0 * (ax + ay), 0.0);
    let a1 = Complex64::new(ax, 0.0);
    let a2 = Complex64::new(ay, 0.0);
    let items = vec![
        NamedItem::new("center", a0, (0..total).map(|j| (j, j)).collect()),
        NamedItem::shifted("x-neighbor:down", a1, -1, (0..total).filter(|j| j % nx != 0)),
        NamedItem::shifted("x-neighbor:up", a1, 1, (0..total).filter(|j| j % nx != nx - 1)),
        NamedItem::shifted("y-neighbor:down", a2, -(nx as i64), nx..total),
        NamedItem::shifted("y-neighbor:up", a2, nx as i64, 0..total - nx),
    ];
    build_named_dictionary(n, items)
}

/// Inputs of the plate-vibration generalized eigenvalue problem
/// `A x = lambda B x`.
///
/// `n1` controls the size of the four-field plate-interior section, `n2` the
/// one-field tail section; `a` and `b` are the stiffness- and mass-side
/// stencil coefficients.  The matrices have dimension `4*n1 + n2 + 5`,
/// padded with zero rows/columns up to the next power of two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GepParameters {
    pub n1: usize,
    pub n2: usize,
    pub a: [Complex64; 13],
    pub b: [Complex64; 6],
}

impl GepParameters {
    fn validate(&self) -> Result<()> {
        for (name, v) in [("n1", self.n1), ("n2", self.n2)] {
            if v < 2 {
                return Err(ApplicationsError::BadParameter {
                    name,
                    message: format!("section size must be at least 2, got {v}"),
                });
            }
        }
        for (k, &v) in self.a.iter().enumerate() {
            ensure_nonzero("a", k, v)?;
        }
        for (k, &v) in self.b.iter().enumerate() {
            ensure_nonzero("b", k, v)?;
        }
        Ok(())
    }
}

/// Builds the matrix pair `(A, B)` of the plate-vibration eigenvalue
/// problem, each with its dictionary.  `A` has 19 items and `B` has 9, one
/// per constant-shift coefficient diagonal of the assembled finite-element
/// stencils.
pub fn gen_gep_matrices(
    params: &GepParameters,
) -> Result<((SparseMatrix, Dictionary), (SparseMatrix, Dictionary))> {
    params.validate()?;
    let n1 = params.n1;
    let n2 = params.n2;
    let a = &params.a;
    let b = &params.b;
    let f = 4 * n1;
    let dim = f + n2 + 5;
    let n = qubits_for_dim(dim)?;

    // Columns lo..=hi whose residue mod 4 lies in `residues`.
    let stride = |lo: usize, hi: usize, residues: &'static [usize]| {
        (lo..=hi).filter(move |j| residues.contains(&(j % 4)))
    };

    let mut a_items = vec![
        NamedItem::shifted("a0:j+2", a[0], 2, 0..=f - 1),
        NamedItem::shifted("a1:j+4", a[1], 4, stride(0, f - 3, &[0, 1])),
        NamedItem::shifted("a1:j", a[1], 0, stride(4, f + 1, &[0, 1])),
        NamedItem::shifted("a2:j+1", a[2], 1, stride(1, f - 3, &[1])),
        NamedItem::shifted("a2:j-3", a[2], -3, stride(5, f + 1, &[1])),
    ];
    let mut mixed = Vec::new();
    for j in f + 4..=f + n2 + 2 {
        mixed.push((j, j + 1));
    }
    for j in [f + 2, f + 3] {
        mixed.push((j, j));
    }
    for j in [2usize, 3] {
        mixed.push((j, j - 2));
    }
    a_items.push(NamedItem::new("a3:mixed", a[3], mixed));
    a_items.extend([
        NamedItem::shifted("a3:j-1", a[3], -1, f + 4..=f + n2 + 4),
        NamedItem::shifted("a4:j", a[4], 0, stride(2, f - 2, &[2])),
        NamedItem::shifted("a4:j-4", a[4], -4, stride(6, f + 2, &[2])),
        NamedItem::shifted("a5:j-4", a[5], -4, stride(7, f + 3, &[3])),
        NamedItem::shifted("a5:j", a[5], 0, stride(3, f - 1, &[3])),
        NamedItem::shifted("a6:j-3", a[6], -3, stride(7, f + 3, &[3])),
        NamedItem::shifted("a6:j+1", a[6], 1, stride(3, f - 1, &[3])),
        NamedItem::shifted("a7:j-2", a[7], -2, 4..=f + 3),
        NamedItem::shifted("a8:j+3", a[8], 3, std::iter::once(f + 1)),
        NamedItem::shifted("a9:j", a[9], 0, std::iter::once(f + 4)),
        NamedItem::shifted("a10:j", a[10], 0, f + 5..=f + n2 + 3),
        NamedItem::shifted("a11:j+1", a[11], 1, std::iter::once(f + n2 + 3)),
        NamedItem::shifted("a12:j", a[12], 0, std::iter::once(f + n2 + 4)),
    ]);

    let b_items = vec![
        NamedItem::shifted("b0:j+3", b[0], 3, stride(0, f - 4, &[0])),
        NamedItem::shifted("b0:j-1", b[0], -1, stride(4, f, &[0])),
        NamedItem::shifted("b1:j+3", b[1], 3, stride(2, f - 2, &[2])),
        NamedItem::shifted("b1:j-1", b[1], -1, stride(6, f + 2, &[2])),
        NamedItem::shifted("b2:j+4", b[2], 4, stride(0, f - 4, &[0])),
        NamedItem::shifted("b2:j", b[2], 0, stride(4, f, &[0])),
        NamedItem::shifted("b3:j", b[3], 0, std::iter::once(f + 4)),
        NamedItem::shifted("b4:j", b[4], 0, f + 5..=f + n2 + 3),
        NamedItem::shifted("b5:j", b[5], 0, std::iter::once(f + n2 + 4)),
    ];

    let a_pack = build_named_dictionary(n, a_items)?;
    let b_pack = build_named_dictionary(n, b_items)?;
    Ok((a_pack, b_pack))
}
