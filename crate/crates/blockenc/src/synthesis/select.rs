//! Table-driven XOR writer: `|k⟩|z⟩ → |k⟩|z ⊕ f(k)⟩`.
//!
//! One multi-controlled X per stored entry: the controls spell the index `k`
//! on the selector register (with negative polarity for 0 bits) and the
//! targets are the word-register qubits where `f(k)` has a 1.  Unlisted
//! indices see no gate at all, matching `f(k) = 0`.

use super::{BooleanFunctionTable, Result, SynthesisError};
use crate::circuit::{Circuit, Gate, RegisterLayout};

/// Builds the XOR writer for `table` over the named registers.
pub fn select_f(
    layout: &RegisterLayout,
    table: &BooleanFunctionTable,
    selector: &str,
    word: &str,
) -> Result<Circuit> {
    for (name, bits) in [(selector, table.index_bits()), (word, table.word_bits())] {
        let reg = layout
            .register(name)
            .ok_or_else(|| SynthesisError::MissingRegister { name: name.to_string() })?;
        if reg.size != bits as usize {
            return Err(SynthesisError::RegisterSizeMismatch {
                name: name.to_string(),
                actual: reg.size,
                expected: bits as usize,
            });
        }
    }
    let mut gates = Vec::new();
    emit_select_f(&mut gates, &layout.qubits(selector), &layout.qubits(word), table);
    let mut circuit = Circuit::new(layout.clone());
    circuit.extend(gates)?;
    Ok(circuit)
}

/// Emits the gates over explicit qubit lists (least significant first), so
/// oracle construction can aim the selector across several registers.
pub(crate) fn emit_select_f(
    gates: &mut Vec<Gate>,
    selector: &[usize],
    word: &[usize],
    table: &BooleanFunctionTable,
) {
    for (k, w) in table.nonzeros() {
        let controls: Vec<(usize, bool)> = selector
            .iter()
            .enumerate()
            .map(|(bit, &q)| (q, (k >> bit) & 1 == 1))
            .collect();
        let targets: Vec<usize> = word
            .iter()
            .enumerate()
            .filter(|(bit, _)| (w >> bit) & 1 == 1)
            .map(|(_, &q)| q)
            .collect();
        gates.push(Gate::Mcx { controls, targets });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    #[test]
    fn empty_table_is_identity() {
        let layout = RegisterLayout::new(&[("k", 2), ("w", 1)]).unwrap();
        let table = BooleanFunctionTable::new(2, 1, vec![]).unwrap();
        let circuit = select_f(&layout, &table, "k", "w").unwrap();
        assert_eq!(circuit.gate_count(), 0);
    }

    #[test]
    fn single_entry_flips_only_its_pattern() {
        let layout = RegisterLayout::new(&[("k", 2), ("w", 1)]).unwrap();
        let table = BooleanFunctionTable::new(2, 1, vec![(3, 1)]).unwrap();
        let circuit = select_f(&layout, &table, "k", "w").unwrap();
        for k in 0..4usize {
            let basis = layout.basis_index(&[("k", k)]);
            let state = circuit.apply_to_basis_state(basis).unwrap();
            let expect_w = if k == 3 { 1 } else { 0 };
            let expect = layout.basis_index(&[("k", k), ("w", expect_w)]);
            for (idx, amp) in state.iter().enumerate() {
                let want = if idx == expect { 1.0 } else { 0.0 };
                assert_eq!(amp.re, want, "k={k} idx={idx}");
                assert_eq!(amp.im, 0.0);
            }
        }
    }

    #[test]
    fn xor_semantics_on_loaded_word() {
        // Starting from |z⟩ ≠ 0 the write must XOR, not overwrite.
        let layout = RegisterLayout::new(&[("k", 1), ("w", 2)]).unwrap();
        let table = BooleanFunctionTable::new(1, 2, vec![(1, 3)]).unwrap();
        let circuit = select_f(&layout, &table, "k", "w").unwrap();
        let basis = layout.basis_index(&[("k", 1), ("w", 2)]);
        let state = circuit.apply_to_basis_state(basis).unwrap();
        let expect = layout.basis_index(&[("k", 1), ("w", 1)]); // 2 ⊕ 3 = 1
        assert_eq!(state[expect].re, 1.0);
    }

    #[test]
    fn random_tables_match_truth_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let layout = RegisterLayout::new(&[("k", 3), ("w", 2)]).unwrap();
            let mut keys = BTreeSet::new();
            while keys.len() < 4 {
                keys.insert(rng.gen_range(0..8u64));
            }
            let entries: Vec<(u64, u64)> =
                keys.iter().map(|&k| (k, rng.gen_range(1..4u64))).collect();
            let table = BooleanFunctionTable::new(3, 2, entries).unwrap();
            let circuit = select_f(&layout, &table, "k", "w").unwrap();
            for k in 0..8usize {
                for z in 0..4usize {
                    let basis = layout.basis_index(&[("k", k), ("w", z)]);
                    let state = circuit.apply_to_basis_state(basis).unwrap();
                    let expect_w = z ^ table.lookup(k as u64) as usize;
                    let expect = layout.basis_index(&[("k", k), ("w", expect_w)]);
                    assert_eq!(state[expect].re, 1.0, "k={k} z={z}");
                }
            }
        }
    }

    #[test]
    fn register_size_mismatch_is_rejected() {
        let layout = RegisterLayout::new(&[("k", 2), ("w", 1)]).unwrap();
        let table = BooleanFunctionTable::new(3, 1, vec![(0, 1)]).unwrap();
        assert!(matches!(
            select_f(&layout, &table, "k", "w"),
            Err(SynthesisError::RegisterSizeMismatch { .. })
        ));
    }
}
