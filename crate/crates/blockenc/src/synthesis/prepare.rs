//! State preparation by multiplexed rotations over a binary amplitude tree.
//!
//! Magnitudes first: level `t` applies one multiplexed Ry to the `t`-th most
//! significant register qubit, selected on the `t` qubits above it; the
//! rotation angles split the squared-amplitude weight of each length-`t`
//! prefix between its two children.  Phases second: a cascade of multiplexed
//! Rz peels off pairwise phase differences, leaving a single residual that is
//! emitted as a global phase.  The resulting state equals the target vector
//! exactly (to rounding), including its overall phase.

use super::{Result, SynthesisError};
use crate::circuit::{Circuit, Gate, Mat2, RegisterLayout};
use crate::numerics::Complex64;

/// Allowed deviation of `∑|amps|²` from 1.
pub(crate) const NORMALIZATION_TOL: f64 = 1e-10;

/// Builds a circuit mapping `|0…0⟩` of `register` to `∑ amps_k |k⟩`.
///
/// Other registers in the layout are untouched.  Fails if the amplitudes are
/// not unit-norm within 1e-10 or do not fit the register.
pub fn prepare_state(
    layout: &RegisterLayout,
    register: &str,
    amps: &[Complex64],
) -> Result<Circuit> {
    let reg = layout
        .register(register)
        .ok_or_else(|| SynthesisError::MissingRegister { name: register.to_string() })?;
    if layout.total_qubits() == 0 {
        return Err(SynthesisError::EmptyLayout);
    }
    let capacity = 1usize
        .checked_shl(reg.size as u32)
        .ok_or(SynthesisError::TooManyAmplitudes { count: amps.len(), capacity: usize::MAX })?;
    if amps.len() > capacity {
        return Err(SynthesisError::TooManyAmplitudes { count: amps.len(), capacity });
    }
    let norm_squared: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm_squared - 1.0).abs() > NORMALIZATION_TOL {
        return Err(SynthesisError::NotNormalized { norm_squared });
    }
    let mut padded = amps.to_vec();
    padded.resize(capacity, Complex64::new(0.0, 0.0));
    let qubits = layout.qubits(register);
    let mut gates = Vec::new();
    emit_prepare_state(&mut gates, &qubits, &padded, 0);
    let mut circuit = Circuit::new(layout.clone());
    circuit.extend(gates)?;
    Ok(circuit)
}

/// Emits the preparation gates for `amps` (length exactly `2^qubits.len()`)
/// onto `qubits` (least significant first).  `anchor` is any valid qubit of
/// the layout, used to carry a residual global phase.
pub(crate) fn emit_prepare_state(
    gates: &mut Vec<Gate>,
    qubits: &[usize],
    amps: &[Complex64],
    anchor: usize,
) {
    let r = qubits.len();
    debug_assert_eq!(amps.len(), 1usize << r);

    // weights[t][p] = total squared amplitude of the prefix p of length t.
    let mut weights: Vec<Vec<f64>> = Vec::with_capacity(r + 1);
    weights.push(amps.iter().map(|a| a.norm_sqr()).collect());
    for _ in 0..r {
        let prev = weights.last().unwrap();
        let folded: Vec<f64> =
            (0..prev.len() / 2).map(|p| prev[2 * p] + prev[2 * p + 1]).collect();
        weights.push(folded);
    }
    weights.reverse(); // weights[t] now has 2^t entries, t = 0..=r

    for t in 0..r {
        let target = qubits[r - 1 - t];
        let selector: Vec<usize> = qubits[r - t..].to_vec();
        let mut payloads = Vec::with_capacity(1usize << t);
        let mut any = false;
        for p in 0..1usize << t {
            let w0 = weights[t + 1][2 * p];
            let w1 = weights[t + 1][2 * p + 1];
            let theta = if w1 == 0.0 { 0.0 } else { 2.0 * w1.sqrt().atan2(w0.sqrt()) };
            if theta != 0.0 {
                any = true;
            }
            payloads.push(Mat2::ry(theta));
        }
        if !any {
            continue;
        }
        if selector.is_empty() {
            gates.push(Gate::Unitary { qubit: target, matrix: payloads.pop().unwrap() });
        } else {
            gates.push(Gate::Multiplexed { selector, target, payloads });
        }
    }

    let phases: Vec<f64> =
        amps.iter().map(|a| if a.norm_sqr() == 0.0 { 0.0 } else { a.arg() }).collect();
    emit_phase_cascade(gates, qubits, &phases, anchor);
}

/// Applies `diag(e^{i·phases[k]})` to the listed qubits (least significant
/// first); `phases` has length `2^qubits.len()`.  Pairwise differences go out
/// as multiplexed Rz, the residual mean as a global phase on `anchor`.
pub(crate) fn emit_phase_cascade(
    gates: &mut Vec<Gate>,
    qubits: &[usize],
    phases: &[f64],
    anchor: usize,
) {
    debug_assert_eq!(phases.len(), 1usize << qubits.len());
    let mut current = phases.to_vec();
    let mut qs = qubits;
    while !qs.is_empty() {
        let half = current.len() / 2;
        let mut payloads = Vec::with_capacity(half);
        let mut next = Vec::with_capacity(half);
        let mut any = false;
        for u in 0..half {
            let beta = current[2 * u + 1] - current[2 * u];
            if beta != 0.0 {
                any = true;
            }
            payloads.push(Mat2::rz(beta));
            next.push(0.5 * (current[2 * u] + current[2 * u + 1]));
        }
        if any {
            let target = qs[0];
            let selector: Vec<usize> = qs[1..].to_vec();
            if selector.is_empty() {
                gates.push(Gate::Unitary { qubit: target, matrix: payloads.pop().unwrap() });
            } else {
                gates.push(Gate::Multiplexed { selector, target, payloads });
            }
        }
        current = next;
        qs = &qs[1..];
    }
    let gamma = current[0];
    if gamma != 0.0 {
        gates.push(Gate::Unitary { qubit: anchor, matrix: Mat2::global_phase(gamma) });
    }
}

/// Emits gates preparing a different state on `aux` for every basis value of
/// `sel`: `|0…0⟩_aux |j⟩_sel → (∑_c rows[j][c] |c⟩_aux) |j⟩_sel`.
///
/// Each `rows[j]` must be unit-norm of length `2^aux.len()`; `rows` has one
/// entry per selector value.  Identical to [`emit_prepare_state`] but with the
/// selector register joined to every multiplexer, and with the per-row
/// residual phases played back as a diagonal on the selector register itself.
pub(crate) fn emit_prepare_rows(
    gates: &mut Vec<Gate>,
    aux: &[usize],
    sel: &[usize],
    rows: &[Vec<Complex64>],
    anchor: usize,
) {
    let r = aux.len();
    let s = sel.len();
    debug_assert_eq!(rows.len(), 1usize << s);
    debug_assert!(rows.iter().all(|row| row.len() == 1usize << r));

    // Per-row prefix weights, indexed [j][t][p].
    let row_weights: Vec<Vec<Vec<f64>>> = rows
        .iter()
        .map(|row| {
            let mut levels: Vec<Vec<f64>> = Vec::with_capacity(r + 1);
            levels.push(row.iter().map(|a| a.norm_sqr()).collect());
            for _ in 0..r {
                let prev = levels.last().unwrap();
                let folded: Vec<f64> =
                    (0..prev.len() / 2).map(|p| prev[2 * p] + prev[2 * p + 1]).collect();
                levels.push(folded);
            }
            levels.reverse();
            levels
        })
        .collect();

    for t in 0..r {
        let target = aux[r - 1 - t];
        let selector: Vec<usize> =
            aux[r - t..].iter().chain(sel.iter()).copied().collect();
        let mut payloads = Vec::with_capacity(1usize << (t + s));
        let mut any = false;
        for v in 0..1usize << (t + s) {
            let j = v >> t;
            let p = v & ((1usize << t) - 1);
            let w0 = row_weights[j][t + 1][2 * p];
            let w1 = row_weights[j][t + 1][2 * p + 1];
            let theta = if w1 == 0.0 { 0.0 } else { 2.0 * w1.sqrt().atan2(w0.sqrt()) };
            if theta != 0.0 {
                any = true;
            }
            payloads.push(Mat2::ry(theta));
        }
        if !any {
            continue;
        }
        gates.push(Gate::Multiplexed { selector, target, payloads });
    }

    // Phase cascade over the aux qubits, one phase ladder per row.
    let mut current: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|a| if a.norm_sqr() == 0.0 { 0.0 } else { a.arg() })
                .collect::<Vec<f64>>()
        })
        .collect();
    for level in 0..r {
        let rho = r - level; // aux qubits still carrying phase information
        let half = 1usize << (rho - 1);
        let mut payloads = Vec::with_capacity(half << s);
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
        let mut any = false;
        for row_phases in &current {
            let mut folded = Vec::with_capacity(half);
            for u in 0..half {
                let beta = row_phases[2 * u + 1] - row_phases[2 * u];
                if beta != 0.0 {
                    any = true;
                }
                folded.push(0.5 * (row_phases[2 * u] + row_phases[2 * u + 1]));
            }
            next.push(folded);
        }
        for v in 0..(half << s) {
            let j = v >> (rho - 1);
            let u = v & (half - 1);
            let beta = current[j][2 * u + 1] - current[j][2 * u];
            payloads.push(Mat2::rz(beta));
        }
        if any {
            let target = aux[level];
            let selector: Vec<usize> =
                aux[level + 1..].iter().chain(sel.iter()).copied().collect();
            gates.push(Gate::Multiplexed { selector, target, payloads });
        }
        current = next;
    }
    // Residual per-row phase: a plain diagonal on the selector register.
    let residual: Vec<f64> = current.iter().map(|row| row[0]).collect();
    if residual.iter().any(|&g| g != 0.0) {
        emit_phase_cascade(gates, sel, &residual, anchor);
    }
}
