//! Lowering of composite gates to the `{U(2), positive CNOT}` target set.
//!
//! Rewrites applied by [`Circuit::decompose`]:
//!
//! * negative-control CNOT → X-conjugated CNOT;
//! * SWAP → three alternating CNOTs;
//! * multi-controlled X with two controls → the standard 15-gate
//!   Toffoli network over {H, T, T†, CNOT};
//! * multi-controlled X with `k ≥ 3` controls → a V-chain: the AND of the
//!   controls is accumulated through `k−1` clean pool ancillas with
//!   Toffolis, the last ancilla fans out to the targets, and the chain is
//!   uncomputed in reverse (ancillas start and end in `|0⟩`);
//! * multiplexed single-qubit gate → recursive case split on the top
//!   selector bit.  Subtrees whose payloads are all identical collapse to a
//!   single branch, and identity subtrees vanish.  Each surviving leaf is a
//!   multi-controlled `U`, emitted via the standard `A·X·B·X·C`
//!   decomposition (`U = e^{iδ} A X B X C` with `A B C = I`) with the
//!   control pattern folded to a single ancilla by the same V-chain when it
//!   is longer than one qubit.
//!
//! Pool ancillas live in a register named `"pool"`.  If the layout already
//! has one it must be large enough (otherwise [`CircuitError::PoolExhausted`]
//! reports the shortfall); if it has none and ancillas are needed, the
//! layout is extended with an exactly-sized pool at the most significant
//! end, leaving existing qubit indices untouched.
//!
//! On the subspace where the pool is `|0⟩` the decomposed circuit acts
//! exactly like the original; verification helpers compare restricted
//! unitaries for this reason.

use super::{Circuit, CircuitError, Gate, Mat2, Result};
use crate::numerics::Complex64;

/// Name of the decomposition ancilla register.
pub const POOL_REGISTER: &str = "pool";

impl Circuit {
    /// Number of pool ancillas [`Circuit::decompose`] will need: the
    /// worst-case single gate (chains are uncomputed, so ancillas are
    /// reused between gates).
    pub fn required_pool(&self) -> usize {
        self.gates().iter().map(gate_pool_need).max().unwrap_or(0)
    }

    /// Rewrites the circuit into elementary form.  See the module docs for
    /// the rewrite rules and the pool-ancilla policy.
    pub fn decompose(&self) -> Result<Circuit> {
        let need = self.required_pool();
        let (layout, pool) = match self.layout().register(POOL_REGISTER) {
            Some(reg) => {
                if reg.size < need {
                    return Err(CircuitError::PoolExhausted {
                        needed: need,
                        available: reg.size,
                    });
                }
                (self.layout().clone(), self.layout().qubits(POOL_REGISTER))
            }
            None if need == 0 => (self.layout().clone(), Vec::new()),
            None => {
                let extended = self.layout().with_register_front(POOL_REGISTER, need)?;
                let pool = extended.qubits(POOL_REGISTER);
                (extended, pool)
            }
        };
        let mut gates = Vec::new();
        for gate in self.gates() {
            emit_decomposed(gate, &pool, &mut gates);
        }
        let mut out = Circuit::new(layout);
        out.extend(gates)?;
        Ok(out)
    }
}

fn gate_pool_need(gate: &Gate) -> usize {
    match gate {
        Gate::Mcx { controls, .. } if controls.len() >= 3 => controls.len() - 1,
        Gate::Multiplexed { selector, payloads, .. } => {
            let mut need = 0usize;
            walk_multiplexed(selector, payloads, &mut Vec::new(), &mut |pattern, _| {
                if pattern.len() >= 2 {
                    need = need.max(pattern.len() - 1);
                }
            });
            need
        }
        _ => 0,
    }
}

fn emit_decomposed(gate: &Gate, pool: &[usize], gates: &mut Vec<Gate>) {
    match gate {
        Gate::Unitary { .. } => gates.push(gate.clone()),
        Gate::Cnot { positive: true, .. } => gates.push(gate.clone()),
        Gate::Cnot { control, target, positive: false } => {
            gates.push(Gate::x(*control));
            gates.push(Gate::Cnot { control: *control, target: *target, positive: true });
            gates.push(Gate::x(*control));
        }
        Gate::Swap { a, b } => {
            gates.push(Gate::Cnot { control: *a, target: *b, positive: true });
            gates.push(Gate::Cnot { control: *b, target: *a, positive: true });
            gates.push(Gate::Cnot { control: *a, target: *b, positive: true });
        }
        Gate::Mcx { controls, targets } => emit_mcx(controls, targets, pool, gates),
        Gate::Multiplexed { selector, target, payloads } => {
            walk_multiplexed(selector, payloads, &mut Vec::new(), &mut |pattern, payload| {
                emit_mcu(pattern, *target, payload, pool, gates);
            });
        }
    }
}

/// Visits the non-trivial leaves of a multiplexed gate.
///
/// Splits on the most significant selector bit; a slice whose payloads are
/// all equal collapses to one leaf (dropped entirely when the payload is the
/// identity).  `sink` receives the control pattern (qubit, required value)
/// and the payload for each surviving leaf.
fn walk_multiplexed(
    selector: &[usize],
    payloads: &[Mat2],
    pattern: &mut Vec<(usize, bool)>,
    sink: &mut dyn FnMut(&[(usize, bool)], &Mat2),
) {
    let first = &payloads[0];
    if payloads.iter().all(|p| p == first) {
        if *first != Mat2::identity() {
            sink(pattern, first);
        }
        return;
    }
    let top = selector.len() - 1;
    let half = payloads.len() / 2;
    pattern.push((selector[top], false));
    walk_multiplexed(&selector[..top], &payloads[..half], pattern, sink);
    pattern.pop();
    pattern.push((selector[top], true));
    walk_multiplexed(&selector[..top], &payloads[half..], pattern, sink);
    pattern.pop();
}

/// Multi-controlled X over an already-positive gate set: negative controls
/// are X-conjugated, 0/1/2-control cases are direct, and longer chains run
/// through the pool.
fn emit_mcx(controls: &[(usize, bool)], targets: &[usize], pool: &[usize], gates: &mut Vec<Gate>) {
    let negatives: Vec<usize> =
        controls.iter().filter(|&&(_, pos)| !pos).map(|&(q, _)| q).collect();
    for &q in &negatives {
        gates.push(Gate::x(q));
    }
    let ctrl: Vec<usize> = controls.iter().map(|&(q, _)| q).collect();
    match ctrl.len() {
        0 => {
            for &t in targets {
                gates.push(Gate::x(t));
            }
        }
        1 => {
            for &t in targets {
                gates.push(Gate::Cnot { control: ctrl[0], target: t, positive: true });
            }
        }
        2 => {
            for &t in targets {
                toffoli15(ctrl[0], ctrl[1], t, gates);
            }
        }
        k => {
            let anc = &pool[..k - 1];
            chain_down(&ctrl, anc, gates);
            for &t in targets {
                gates.push(Gate::Cnot { control: anc[k - 2], target: t, positive: true });
            }
            chain_up(&ctrl, anc, gates);
        }
    }
    for &q in &negatives {
        gates.push(Gate::x(q));
    }
}

/// Computes the AND of `ctrl` into `anc[len-1]` via Toffolis:
/// `anc[0] = c0∧c1`, `anc[i] = c_{i+1} ∧ anc[i-1]`.
fn chain_down(ctrl: &[usize], anc: &[usize], gates: &mut Vec<Gate>) {
    toffoli15(ctrl[0], ctrl[1], anc[0], gates);
    for i in 2..ctrl.len() {
        toffoli15(ctrl[i], anc[i - 2], anc[i - 1], gates);
    }
}

/// Uncomputes [`chain_down`].
fn chain_up(ctrl: &[usize], anc: &[usize], gates: &mut Vec<Gate>) {
    for i in (2..ctrl.len()).rev() {
        toffoli15(ctrl[i], anc[i - 2], anc[i - 1], gates);
    }
    toffoli15(ctrl[0], ctrl[1], anc[0], gates);
}

/// Multi-controlled single-qubit unitary.
fn emit_mcu(
    pattern: &[(usize, bool)],
    target: usize,
    payload: &Mat2,
    pool: &[usize],
    gates: &mut Vec<Gate>,
) {
    let negatives: Vec<usize> =
        pattern.iter().filter(|&&(_, pos)| !pos).map(|&(q, _)| q).collect();
    for &q in &negatives {
        gates.push(Gate::x(q));
    }
    match pattern.len() {
        0 => gates.push(Gate::Unitary { qubit: target, matrix: *payload }),
        1 => emit_cu(pattern[0].0, target, payload, gates),
        k => {
            let ctrl: Vec<usize> = pattern.iter().map(|&(q, _)| q).collect();
            let anc = &pool[..k - 1];
            chain_down(&ctrl, anc, gates);
            emit_cu(anc[k - 2], target, payload, gates);
            chain_up(&ctrl, anc, gates);
        }
    }
    for &q in &negatives {
        gates.push(Gate::x(q));
    }
}

/// Controlled-U via the `A·X·B·X·C` construction: with
/// `U = e^{iδ} Rz(φ) Ry(θ) Rz(λ)`, take `A = Rz(φ)Ry(θ/2)`,
/// `B = Ry(−θ/2)Rz(−(φ+λ)/2)`, `C = Rz((λ−φ)/2)`; then `A B C = I` and
/// `A X B X C = e^{-iδ} U`, so sandwiching CNOTs and adding
/// `diag(1, e^{iδ})` on the control realises controlled-U.
fn emit_cu(control: usize, target: usize, payload: &Mat2, gates: &mut Vec<Gate>) {
    let (delta, theta, phi, lambda) = zyz(payload);
    let a = Mat2::rz(phi).mul(&Mat2::ry(theta / 2.0));
    let b = Mat2::ry(-theta / 2.0).mul(&Mat2::rz(-(phi + lambda) / 2.0));
    let c = Mat2::rz((lambda - phi) / 2.0);
    let identity = Mat2::identity();
    if c != identity {
        gates.push(Gate::Unitary { qubit: target, matrix: c });
    }
    gates.push(Gate::Cnot { control, target, positive: true });
    if b != identity {
        gates.push(Gate::Unitary { qubit: target, matrix: b });
    }
    gates.push(Gate::Cnot { control, target, positive: true });
    if a != identity {
        gates.push(Gate::Unitary { qubit: target, matrix: a });
    }
    if delta != 0.0 {
        gates.push(Gate::Unitary { qubit: control, matrix: Mat2::phase_on_one(delta) });
    }
}

/// Z-Y-Z Euler angles: returns `(δ, θ, φ, λ)` with
/// `U = e^{iδ} · Rz(φ) · Ry(θ) · Rz(λ)` and `θ ∈ [0, π]`.
pub(crate) fn zyz(u: &Mat2) -> (f64, f64, f64, f64) {
    let m = &u.0;
    let (u00, u01, u10, u11) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let theta = 2.0 * u10.norm().atan2(u00.norm());
    // Argument with -0.0 components normalised to +0.0, so that e.g.
    // -(1+0i) lands on +π rather than -π.
    let arg = |z: Complex64| Complex64::new(z.re + 0.0, z.im + 0.0).arg();
    // Magnitudes below this threshold contribute less than payload
    // validation tolerance to the reconstruction.
    const TINY: f64 = 1e-15;
    if u10.norm() <= TINY {
        // Diagonal: fix λ = 0.
        let delta = (arg(u00) + arg(u11)) / 2.0;
        let phi = 2.0 * (arg(u11) - delta);
        (delta, theta, phi, 0.0)
    } else if u00.norm() <= TINY {
        // Anti-diagonal: fix φ = 0.
        let delta = (arg(u10) + arg(-u01)) / 2.0;
        let lambda = 2.0 * (arg(-u01) - delta);
        (delta, theta, 0.0, lambda)
    } else {
        let delta = (arg(u00) + arg(u11)) / 2.0;
        let sum = arg(u11) - arg(u00); // φ + λ
        let diff = 2.0 * (arg(u10) - delta); // φ − λ
        (delta, theta, (sum + diff) / 2.0, (sum - diff) / 2.0)
    }
}

/// The standard 15-gate Toffoli network over {H, T, T†, CNOT}.
fn toffoli15(a: usize, b: usize, target: usize, gates: &mut Vec<Gate>) {
    let t = Mat2::t_gate();
    let tdg = Mat2::t_dagger();
    let h = Mat2::hadamard();
    gates.push(Gate::Unitary { qubit: target, matrix: h });
    gates.push(Gate::Cnot { control: b, target, positive: true });
    gates.push(Gate::Unitary { qubit: target, matrix: tdg });
    gates.push(Gate::Cnot { control: a, target, positive: true });
    gates.push(Gate::Unitary { qubit: target, matrix: t });
    gates.push(Gate::Cnot { control: b, target, positive: true });
    gates.push(Gate::Unitary { qubit: target, matrix: tdg });
    gates.push(Gate::Cnot { control: a, target, positive: true });
    gates.push(Gate::Unitary { qubit: b, matrix: t });
    gates.push(Gate::Unitary { qubit: target, matrix: t });
    gates.push(Gate::Unitary { qubit: target, matrix: h });
    gates.push(Gate::Cnot { control: a, target: b, positive: true });
    gates.push(Gate::Unitary { qubit: a, matrix: t });
    gates.push(Gate::Unitary { qubit: b, matrix: tdg });
    gates.push(Gate::Cnot { control: a, target: b, positive: true });
}
