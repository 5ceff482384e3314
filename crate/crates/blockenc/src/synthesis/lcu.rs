//! Tensor-of-X linear-combination form.
//!
//! A dictionary item whose map is `j → j ⊕ t` for a fixed mask `t`, defined on
//! *every* column, acts as the permutation `X^{⊗t}` on the system register —
//! a self-inverse tensor product of Pauli-X and identity factors.  When every
//! item has this shape the whole matrix is `Σ_l A_l · X^{t_l}`: a linear
//! combination of unitaries with coefficients `√A_l` on the load/unload side.
//! The flag qubit never leaves `|0⟩` (full coverage means nothing is ever
//! deleted), so each term extends to `n + 1` qubits as identity ⊗ the mask.

use super::{Result, SynthesisError};
use crate::numerics::{principal_sqrt, Complex64, DenseMatrix};
use crate::sparse::{SparseMatrix, Triplet};

/// A matrix in the form `Σ_l A_l · X^{t_l}` over `n + 1` qubits (flag +
/// system), with the flag factor always identity.
#[derive(Debug, Clone, PartialEq)]
pub struct LcuForm {
    n: u32,
    values: Vec<Complex64>,
    coefficients: Vec<Complex64>,
    masks: Vec<u64>,
}

impl LcuForm {
    /// System qubits (terms act on `n + 1` qubits including the flag).
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn term_count(&self) -> usize {
        self.values.len()
    }

    /// Exact item values `A_l`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Load amplitudes `√A_l` (principal square root).
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// XOR masks on `n + 1` bits; bit `n` (the flag) is always zero.
    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// Dense `(n+1)`-qubit matrix of term `l`: the permutation
    /// `|z⟩ → |z ⊕ t_l⟩`.  Each term is self-inverse.
    pub fn term_matrix(&self, l: usize) -> DenseMatrix {
        let dim = 1usize << (self.n + 1);
        let mask = self.masks[l] as usize;
        let mut m = DenseMatrix::zeros((dim, dim));
        for col in 0..dim {
            m[(col ^ mask, col)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Rebuilds `Σ_l A_l · X^{t_l}` on the system register.  The result
    /// matches the source dictionary's matrix exactly: values are copied, not
    /// recomputed.
    pub fn reconstruct(&self) -> Result<SparseMatrix> {
        let dim = 1usize << self.n;
        let mut triplets = Vec::with_capacity(self.values.len() * dim);
        for (l, &value) in self.values.iter().enumerate() {
            let mask = self.masks[l] as usize;
            for col in 0..dim {
                triplets.push(Triplet { row: col ^ mask, col, value });
            }
        }
        Ok(SparseMatrix::new(self.n, triplets)?)
    }
}

/// Extracts the tensor-of-X form of a dictionary.  Every item must cover all
/// `2^n` columns with a constant XOR shift `c_l(j) = j ⊕ t_l`; otherwise the
/// offending item (and the first witnessing column pair or missing column) is
/// reported.
pub fn export_lcu(d: &crate::dictionary::Dictionary) -> Result<LcuForm> {
    let n = d.n();
    let dim = d.dim();
    let mut values = Vec::with_capacity(d.item_count());
    let mut coefficients = Vec::with_capacity(d.item_count());
    let mut masks = Vec::with_capacity(d.item_count());
    for (l, it) in d.items().iter().enumerate() {
        if it.support_size() != dim {
            let column = (0..dim)
                .find(|&j| it.row_for(j).is_none())
                .expect("support smaller than dim leaves a column uncovered");
            return Err(SynthesisError::LcuIncompleteCoverage { item: l, column });
        }
        let map = it.map();
        let (first_col, first_row) = map[0];
        let mask = first_col ^ first_row;
        for &(col, row) in &map[1..] {
            if col ^ row != mask {
                return Err(SynthesisError::NotLcuExpressible {
                    item: l,
                    column_a: first_col,
                    column_b: col,
                });
            }
        }
        values.push(it.value());
        coefficients.push(principal_sqrt(it.value()));
        masks.push(mask as u64);
    }
    Ok(LcuForm { n, values, coefficients, masks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{DataItem, Dictionary};
    use crate::numerics::identity_matrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn item(value: Complex64, pairs: &[(usize, usize)]) -> DataItem {
        DataItem::new(value, pairs.to_vec()).unwrap()
    }

    #[test]
    fn identity_dictionary_gives_zero_mask() {
        let d = Dictionary::new(
            2,
            vec![item(c(1.0, 0.0), &[(0, 0), (1, 1), (2, 2), (3, 3)])],
        )
        .unwrap();
        let form = export_lcu(&d).unwrap();
        assert_eq!(form.term_count(), 1);
        assert_eq!(form.masks(), &[0]);
        assert_eq!(form.values(), &[c(1.0, 0.0)]);
        assert_eq!(form.coefficients(), &[c(1.0, 0.0)]);
        assert_eq!(form.reconstruct().unwrap(), d.to_matrix().unwrap());
    }

    #[test]
    fn anti_diagonal_is_all_x() {
        let dim = 4usize;
        let pairs: Vec<(usize, usize)> = (0..dim).map(|j| (j, dim - 1 - j)).collect();
        let d = Dictionary::new(2, vec![item(c(1.0, 0.0), &pairs)]).unwrap();
        let form = export_lcu(&d).unwrap();
        assert_eq!(form.masks(), &[3]);
        // X⊗X on the system, identity on the flag bit.
        let t = form.term_matrix(0);
        assert_eq!(t[(3, 0)], c(1.0, 0.0));
        assert_eq!(t[(4 + 3, 4 + 0)], c(1.0, 0.0));
        assert_eq!(t[(0, 0)], c(0.0, 0.0));
    }

    #[test]
    fn terms_are_self_inverse() {
        let d = Dictionary::new(
            2,
            vec![
                item(c(0.5, 1.0), &[(0, 0), (1, 1), (2, 2), (3, 3)]),
                item(c(-2.0, 0.25), &[(0, 1), (1, 0), (2, 3), (3, 2)]),
                item(c(0.0, -1.0), &[(0, 3), (1, 2), (2, 1), (3, 0)]),
            ],
        )
        .unwrap();
        let form = export_lcu(&d).unwrap();
        assert_eq!(form.masks(), &[0, 1, 3]);
        let eye = identity_matrix(8);
        for l in 0..form.term_count() {
            let t = form.term_matrix(l);
            let square = t.dot(&t);
            assert_eq!(square, eye, "term {l} is not self-inverse");
        }
        assert_eq!(form.reconstruct().unwrap(), d.to_matrix().unwrap());
    }

    #[test]
    fn cyclic_shift_is_rejected_with_column_witnesses() {
        let dim = 8usize;
        let pairs: Vec<(usize, usize)> = (0..dim).map(|j| (j, (j + 1) % dim)).collect();
        let d = Dictionary::new(3, vec![item(c(1.0, 0.0), &pairs)]).unwrap();
        // Masks differ already between columns 0 and 1: 0⊕1 = 1, 1⊕2 = 3.
        assert!(matches!(
            export_lcu(&d),
            Err(SynthesisError::NotLcuExpressible { item: 0, column_a: 0, column_b: 1 })
        ));
    }

    #[test]
    fn incomplete_coverage_is_rejected_with_the_missing_column() {
        let d = Dictionary::new(2, vec![item(c(1.0, 0.0), &[(0, 0), (1, 1)])]).unwrap();
        assert!(matches!(
            export_lcu(&d),
            Err(SynthesisError::LcuIncompleteCoverage { item: 0, column: 2 })
        ));
    }
}
