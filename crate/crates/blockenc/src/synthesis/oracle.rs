//! The column oracle `O_c`: routes the system register through a dictionary's
//! column→row maps, selected by the index register.
//!
//! Five stages over a work (`scratch`) register of the same width as the
//! routed register:
//!
//! 1. X on the deletion flag — assume invalid until proven otherwise;
//! 2. *ranging*: an XOR writer keyed on (item, input) clears the flag exactly
//!    on defined pairs;
//! 3. *mapping*: keyed on (item, flag = 0, input), XOR the output value into
//!    scratch;
//! 4. *uncompute*: keyed on (item, flag = 0, output), XOR the input value off
//!    the routed register — valid because each item's map is injective, so
//!    the output determines the input;
//! 5. a flag-0-controlled swap of the routed register with scratch, leaving
//!    scratch back at `|0…0⟩`.
//!
//! Net action: `|l⟩|0⟩|j⟩ → |l⟩|0⟩|c_l(j)⟩` when item `l` defines column `j`,
//! else `|l⟩|1⟩|j⟩`, with scratch always restored.
//!
//! The plain variant routes the *system* register (the index register holds
//! the item number and is untouched).  The Hermitian variant routes the
//! *index* register instead — conditioned on the system value `j`, the item
//! number `l` becomes the row index — which is what makes the palindrome
//! assembly of [`super::assemble_hermitian`] Hermitian by construction.

use super::select::emit_select_f;
use super::{BooleanFunctionTable, Result};
use crate::circuit::{Circuit, Gate, RegisterLayout};
use crate::dictionary::{DataItem, Dictionary, HermitianDictionary};

/// Register layout used by [`build_oc`] and [`assemble`](super::assemble):
/// `idx` (item number, `⌈log₂ s₀⌉` qubits), `del` (deletion flag), `system`
/// (`n` qubits), `scratch` (`n` qubits), most significant first.
pub fn oc_layout(d: &Dictionary) -> RegisterLayout {
    let m = d.index_bits() as usize;
    let n = d.n() as usize;
    RegisterLayout::new(&[("idx", m), ("del", 1), ("system", n), ("scratch", n)])
        .expect("fixed register names are valid")
}

/// Register layout used by [`build_oc_hermitian`] and
/// [`assemble_hermitian`](super::assemble_hermitian): `idx` (`n` qubits, routed),
/// `del1` (deletion flag), `del0` (spectator flag swapped in mid-circuit),
/// `system` (`n` qubits), `scratch` (`n` qubits).
pub fn oc_hermitian_layout(hd: &HermitianDictionary) -> RegisterLayout {
    let n = hd.n() as usize;
    RegisterLayout::new(&[("idx", n), ("del1", 1), ("del0", 1), ("system", n), ("scratch", n)])
        .expect("fixed register names are valid")
}

/// One defined (frozen, input, output) routing triple.
struct Route {
    frozen: u64,
    input: u64,
    output: u64,
}

fn plain_routes(items: &[DataItem]) -> Vec<Route> {
    let mut routes = Vec::new();
    for (l, item) in items.iter().enumerate() {
        for &(col, row) in item.map() {
            routes.push(Route { frozen: l as u64, input: col as u64, output: row as u64 });
        }
    }
    routes
}

fn hermitian_routes(items: &[DataItem]) -> Vec<Route> {
    let mut routes = Vec::new();
    for (l, item) in items.iter().enumerate() {
        for &(col, row) in item.map() {
            routes.push(Route { frozen: col as u64, input: l as u64, output: row as u64 });
        }
    }
    routes
}

/// Emits the five stages.  `routed`/`scratch` have equal width `e`;
/// `frozen` has width `f`; each route must satisfy `frozen < 2^f`,
/// `input < 2^e`, `output < 2^e`, with (frozen, input) and (frozen, output)
/// pairs both unique.
fn emit_oc_stages(
    gates: &mut Vec<Gate>,
    routed: &[usize],
    frozen: &[usize],
    del: usize,
    scratch: &[usize],
    routes: &[Route],
) -> Result<()> {
    debug_assert_eq!(routed.len(), scratch.len());
    let e = routed.len() as u32;
    let f = frozen.len() as u32;

    // Stage 1: assume invalid.
    gates.push(Gate::x(del));

    // Stage 2 (ranging): clear the flag on every defined (frozen, input).
    let ranging = BooleanFunctionTable::new(
        e + f,
        1,
        routes.iter().map(|r| ((r.frozen << e) | r.input, 1u64)),
    )?;
    let ranging_selector: Vec<usize> = routed.iter().chain(frozen.iter()).copied().collect();
    emit_select_f(gates, &ranging_selector, &[del], &ranging);

    // Stage 3 (mapping): with the flag clear, write the output into scratch.
    let mapping = BooleanFunctionTable::new(
        e + 1 + f,
        e,
        routes
            .iter()
            .filter(|r| r.output != 0)
            .map(|r| ((r.frozen << (e + 1)) | r.input, r.output)),
    )?;
    let flagged_in: Vec<usize> = routed
        .iter()
        .copied()
        .chain(std::iter::once(del))
        .chain(frozen.iter().copied())
        .collect();
    emit_select_f(gates, &flagged_in, scratch, &mapping);

    // Stage 4 (uncompute): keyed on the output, erase the input.
    let uncompute = BooleanFunctionTable::new(
        e + 1 + f,
        e,
        routes
            .iter()
            .filter(|r| r.input != 0)
            .map(|r| ((r.frozen << (e + 1)) | r.output, r.input)),
    )?;
    let flagged_out: Vec<usize> = scratch
        .iter()
        .copied()
        .chain(std::iter::once(del))
        .chain(frozen.iter().copied())
        .collect();
    emit_select_f(gates, &flagged_out, routed, &uncompute);

    // Stage 5: flag-0-controlled swap routed ↔ scratch.  SWAP is three CNOTs;
    // controlling only the middle one suffices, because with the flag set the
    // outer pair cancels.
    for (&r, &s) in routed.iter().zip(scratch.iter()) {
        gates.push(Gate::Cnot { control: r, target: s, positive: true });
        gates.push(Gate::Mcx { controls: vec![(del, false), (s, true)], targets: vec![r] });
        gates.push(Gate::Cnot { control: r, target: s, positive: true });
    }
    Ok(())
}

pub(crate) fn emit_oc_plain(
    gates: &mut Vec<Gate>,
    layout: &RegisterLayout,
    d: &Dictionary,
) -> Result<()> {
    emit_oc_stages(
        gates,
        &layout.qubits("system"),
        &layout.qubits("idx"),
        layout.qubit("del", 0),
        &layout.qubits("scratch"),
        &plain_routes(d.items()),
    )
}

pub(crate) fn emit_oc_herm(
    gates: &mut Vec<Gate>,
    layout: &RegisterLayout,
    hd: &HermitianDictionary,
) -> Result<()> {
    emit_oc_stages(
        gates,
        &layout.qubits("idx"),
        &layout.qubits("system"),
        layout.qubit("del1", 0),
        &layout.qubits("scratch"),
        &hermitian_routes(hd.items()),
    )
}

/// Builds the plain column oracle over [`oc_layout`].
pub fn build_oc(d: &Dictionary) -> Result<Circuit> {
    let layout = oc_layout(d);
    let mut gates = Vec::new();
    emit_oc_plain(&mut gates, &layout, d)?;
    let mut circuit = Circuit::new(layout);
    circuit.extend(gates)?;
    Ok(circuit)
}

/// Builds the Hermitian-variant column oracle over [`oc_hermitian_layout`]:
/// conditioned on the system register `|j⟩`, routes the index register from
/// the item number `l` to the row index, flagging `del1` on undefined pairs.
/// `del0` is untouched.
pub fn build_oc_hermitian(hd: &HermitianDictionary) -> Result<Circuit> {
    let layout = oc_hermitian_layout(hd);
    let mut gates = Vec::new();
    emit_oc_herm(&mut gates, &layout, hd)?;
    let mut circuit = Circuit::new(layout);
    circuit.extend(gates)?;
    Ok(circuit)
}
