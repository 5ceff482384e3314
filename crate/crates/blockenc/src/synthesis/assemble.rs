//! Full block-encoding assembly.
//!
//! Plain pipeline: load `√(A_l/α)` amplitudes on the index register, route the
//! system register through the column oracle, then unload with the adjoint of
//! a preparation over *conjugated* amplitudes.  Projecting the index, flag and
//! scratch registers back onto `|0…0⟩` leaves exactly `A/α` on the system
//! register: the surviving paths pick up `√A_l · √A_l = A_l` per item, and the
//! flagged (undefined) paths are orthogonal to the projector.
//!
//! Hermitian pipeline: a palindrome `P† O† S O P` where `S` swaps the two
//! flag qubits and the index register with the system register.  `S` is
//! self-adjoint, so the whole product is Hermitian by construction, and the
//! symmetric coverage of the dictionary makes its top-left block equal `A/α`.

use super::oracle::{emit_oc_herm, emit_oc_plain, oc_hermitian_layout, oc_layout};
use super::prepare::emit_prepare_state;
use super::{BlockEncoding, EncodingSource, Result};
use crate::circuit::{Circuit, Gate};
use crate::dictionary::{Dictionary, HermitianDictionary};
use crate::numerics::{principal_sqrt, Complex64};

/// Builds the block encoding of a dictionary's matrix with subnormalization
/// `α = Σ|A_l|` and `m + 1 + n` ancilla qubits.
pub fn assemble(d: &Dictionary) -> Result<BlockEncoding> {
    let layout = oc_layout(d);
    let m = d.index_bits() as usize;
    let n = d.n() as usize;
    let alpha = d.subnormalization();
    let sqrt_alpha = alpha.sqrt();

    let mut load_amps: Vec<Complex64> =
        d.items().iter().map(|it| principal_sqrt(it.value()) / sqrt_alpha).collect();
    load_amps.resize(1 << m, Complex64::new(0.0, 0.0));
    let unload_amps: Vec<Complex64> = load_amps.iter().map(|a| a.conj()).collect();

    let idx_qubits = layout.qubits("idx");
    let mut gates = Vec::new();
    emit_prepare_state(&mut gates, &idx_qubits, &load_amps, 0);
    emit_oc_plain(&mut gates, &layout, d)?;
    // The unload oracle sends (1/√α)Σ conj(√A_l)|l⟩ back to |0⟩; it is the
    // adjoint of preparing that conjugated vector.
    let mut unload = Vec::new();
    emit_prepare_state(&mut unload, &idx_qubits, &unload_amps, 0);
    gates.extend(unload.iter().rev().map(Gate::adjoint));

    let mut circuit = Circuit::new(layout);
    circuit.extend(gates)?;
    Ok(BlockEncoding {
        circuit,
        alpha,
        ancilla_count: m + 1 + n,
        source: EncodingSource::Dictionary(d.clone()),
    })
}

/// Builds a Hermitian block encoding of a symmetric positive-valued
/// dictionary's matrix: the resulting unitary satisfies `U = U†` (and hence
/// `U² = I`) structurally, with subnormalization `α = Σ A_l` and `2n + 2`
/// ancilla qubits.
pub fn assemble_hermitian(hd: &HermitianDictionary) -> Result<BlockEncoding> {
    let layout = oc_hermitian_layout(hd);
    let n = hd.n() as usize;
    let m = hd.index_bits() as usize;
    let alpha = hd.subnormalization();

    // Values are strictly positive reals, so the amplitudes are real and the
    // unload stage is exactly the adjoint of the load stage.
    let mut amps: Vec<Complex64> = hd
        .items()
        .iter()
        .map(|it| Complex64::new((it.value().re / alpha).sqrt(), 0.0))
        .collect();
    amps.resize(1 << m, Complex64::new(0.0, 0.0));

    let idx_qubits = layout.qubits("idx");
    let sys_qubits = layout.qubits("system");
    let del1 = layout.qubit("del1", 0);
    let del0 = layout.qubit("del0", 0);

    let mut load = Vec::new();
    // The item number occupies the low m bits of the n-qubit index register.
    emit_prepare_state(&mut load, &idx_qubits[..m], &amps, 0);
    let mut oc = Vec::new();
    emit_oc_herm(&mut oc, &layout, hd)?;

    let mut gates = load.clone();
    gates.extend(oc.iter().cloned());
    gates.push(Gate::Swap { a: del1, b: del0 });
    for (&i, &s) in idx_qubits.iter().zip(sys_qubits.iter()) {
        gates.push(Gate::Swap { a: i, b: s });
    }
    gates.extend(oc.iter().rev().map(Gate::adjoint));
    gates.extend(load.iter().rev().map(Gate::adjoint));

    let mut circuit = Circuit::new(layout);
    circuit.extend(gates)?;
    Ok(BlockEncoding {
        circuit,
        alpha,
        ancilla_count: 2 * n + 2,
        source: EncodingSource::Hermitian(hd.clone()),
    })
}
