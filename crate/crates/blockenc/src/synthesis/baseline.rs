//! Row-norm baseline block encoding with `α = ‖A‖_F`.
//!
//! Three stages over an `n`-qubit auxiliary register and the `n`-qubit
//! system register:
//!
//! 1. load the row-norm distribution `‖A_{r,·}‖/‖A‖_F` on the auxiliary,
//! 2. swap auxiliary and system,
//! 3. unload with the adjoint of a multiplexed preparation that, for system
//!    value `i`, loads the conjugated normalized row
//!    `∑_c conj(A_{i,c})/‖A_{i,·}‖ |c⟩` on the auxiliary.
//!
//! Projecting the auxiliary back on `|0⟩` then picks out
//! `⟨row_i, (‖A_i‖/‖A‖_F) e_j⟩ = A_{ij}/‖A‖_F`.  Zero rows load the trivial
//! state `|0⟩`; their block entries vanish through the zero row-norm factor.

use super::prepare::{emit_prepare_rows, emit_prepare_state};
use super::{BlockEncoding, EncodingSource, Result, SynthesisError};
use crate::circuit::{Circuit, CircuitError, Gate, RegisterLayout, APPLY_CAP};
use crate::numerics::Complex64;
use crate::sparse::SparseMatrix;

/// Builds the row-norm block encoding of a nonzero matrix.  The
/// subnormalization equals `frobenius_norm` of the input exactly (same
/// accumulation), and the single ancilla register has `n` qubits.
pub fn frobenius_baseline(a: &SparseMatrix) -> Result<BlockEncoding> {
    let n = a.n() as usize;
    let alpha = a.frobenius_norm();
    if alpha == 0.0 {
        return Err(SynthesisError::ZeroMatrix);
    }
    if n == 0 {
        return Err(SynthesisError::EmptyLayout);
    }
    if 2 * n > APPLY_CAP as usize {
        return Err(SynthesisError::Circuit(CircuitError::SimulationCapExceeded {
            qubits: 2 * n,
            cap: APPLY_CAP,
        }));
    }
    let layout = RegisterLayout::new(&[("aux", n), ("system", n)])
        .expect("fixed register names are valid");
    let dim = 1usize << n;

    let mut rows: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    let mut row_norm_sq = vec![0.0f64; dim];
    for t in a.triplets() {
        rows[t.row][t.col] = t.value;
        row_norm_sq[t.row] += t.value.norm_sqr();
    }
    let load_amps: Vec<Complex64> = row_norm_sq
        .iter()
        .map(|&w| Complex64::new(w.sqrt() / alpha, 0.0))
        .collect();
    for (i, row) in rows.iter_mut().enumerate() {
        if row_norm_sq[i] == 0.0 {
            row[0] = Complex64::new(1.0, 0.0);
        } else {
            let norm = row_norm_sq[i].sqrt();
            for v in row.iter_mut() {
                *v = v.conj() / norm;
            }
        }
    }

    let aux = layout.qubits("aux");
    let sys = layout.qubits("system");
    let mut gates = Vec::new();
    emit_prepare_state(&mut gates, &aux, &load_amps, 0);
    for (&x, &s) in aux.iter().zip(sys.iter()) {
        gates.push(Gate::Swap { a: x, b: s });
    }
    let mut unload = Vec::new();
    emit_prepare_rows(&mut unload, &aux, &sys, &rows, 0);
    gates.extend(unload.iter().rev().map(Gate::adjoint));

    let mut circuit = Circuit::new(layout);
    circuit.extend(gates)?;
    Ok(BlockEncoding {
        circuit,
        alpha,
        ancilla_count: n,
        source: EncodingSource::Frobenius(a.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::super::verify::verify_block_encoding;
    use super::*;
    use crate::circuit::DEFAULT_UNITARY_CAP;
    use crate::sparse::Triplet;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_two_by_two() {
        let a = SparseMatrix::new(
            1,
            vec![
                Triplet { row: 0, col: 0, value: c(1.0, 0.0) },
                Triplet { row: 1, col: 1, value: c(1.0, 0.0) },
            ],
        )
        .unwrap();
        let be = frobenius_baseline(&a).unwrap();
        assert_eq!(be.alpha, 2f64.sqrt());
        assert_eq!(be.ancilla_count, 1);
        let report = verify_block_encoding(&be, &a, 1e-12, DEFAULT_UNITARY_CAP).unwrap();
        assert!(report.passed, "epsilon {}", report.epsilon);
    }

    #[test]
    fn rank_one_projector() {
        let a = SparseMatrix::new(1, vec![Triplet { row: 0, col: 0, value: c(1.0, 0.0) }])
            .unwrap();
        let be = frobenius_baseline(&a).unwrap();
        assert_eq!(be.alpha, 1.0);
        let state = be.circuit.apply_to_basis_state(0).unwrap();
        // Block entry (0,0) sits at the all-zero basis index.
        assert!((state[0].re - 1.0).abs() < 1e-12);
        let report = verify_block_encoding(&be, &a, 1e-12, DEFAULT_UNITARY_CAP).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn matrix_with_a_zero_row() {
        let a = SparseMatrix::new(
            1,
            vec![
                Triplet { row: 1, col: 0, value: c(0.0, 2.0) },
                Triplet { row: 1, col: 1, value: c(-1.0, 0.0) },
            ],
        )
        .unwrap();
        let be = frobenius_baseline(&a).unwrap();
        let report = verify_block_encoding(&be, &a, 1e-12, DEFAULT_UNITARY_CAP).unwrap();
        assert!(report.passed, "epsilon {}", report.epsilon);
    }

    #[test]
    fn random_complex_four_by_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let mut triplets = Vec::new();
            for row in 0..4usize {
                for col in 0..4usize {
                    if rng.gen_bool(0.8) {
                        triplets.push(Triplet {
                            row,
                            col,
                            value: c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                        });
                    }
                }
            }
            if triplets.is_empty() {
                continue;
            }
            let a = SparseMatrix::new(2, triplets).unwrap();
            let be = frobenius_baseline(&a).unwrap();
            assert_eq!(be.alpha, a.frobenius_norm());
            let report = verify_block_encoding(&be, &a, 1e-9, DEFAULT_UNITARY_CAP).unwrap();
            assert!(report.passed, "epsilon {}", report.epsilon);
            assert!(report.unitarity_residual < 1e-10);
        }
    }

    #[test]
    fn zero_matrix_is_rejected() {
        let a = SparseMatrix::new(1, vec![]).unwrap();
        assert!(matches!(frobenius_baseline(&a), Err(SynthesisError::ZeroMatrix)));
    }
}
