//! Dense state-vector simulation of circuits.
//!
//! Every gate kind (composite ones included) has a direct action on a state
//! vector, so circuits can be simulated both before and after
//! [`Circuit::decompose`]; decomposition-equivalence tests lean on this.
//! Unitaries are assembled column by column — each basis column is an
//! independent state-vector run — which parallelises cleanly and avoids any
//! dense matrix-matrix products.

use super::{Circuit, CircuitError, Gate, Result, APPLY_CAP};
use crate::numerics::{Complex64, DenseMatrix, StateVector};
use rayon::prelude::*;

/// Applies one gate to a full state vector (length `2^total`).
pub(crate) fn apply_gate(gate: &Gate, state: &mut [Complex64]) {
    match gate {
        Gate::Unitary { qubit, matrix } => {
            let mask = 1usize << qubit;
            let m = &matrix.0;
            for i in 0..state.len() {
                if i & mask == 0 {
                    let j = i | mask;
                    let (a, b) = (state[i], state[j]);
                    state[i] = m[0][0] * a + m[0][1] * b;
                    state[j] = m[1][0] * a + m[1][1] * b;
                }
            }
        }
        Gate::Cnot { control, target, positive } => {
            let cmask = 1usize << control;
            let tmask = 1usize << target;
            let want = if *positive { cmask } else { 0 };
            for i in 0..state.len() {
                if i & cmask == want && i & tmask == 0 {
                    state.swap(i, i | tmask);
                }
            }
        }
        Gate::Swap { a, b } => {
            let amask = 1usize << a;
            let bmask = 1usize << b;
            for i in 0..state.len() {
                if i & amask != 0 && i & bmask == 0 {
                    state.swap(i, i ^ (amask | bmask));
                }
            }
        }
        Gate::Mcx { controls, targets } => {
            let mut cmask = 0usize;
            let mut want = 0usize;
            for &(q, positive) in controls {
                cmask |= 1 << q;
                if positive {
                    want |= 1 << q;
                }
            }
            let tmask: usize = targets.iter().map(|&q| 1usize << q).sum();
            for i in 0..state.len() {
                let j = i ^ tmask;
                // Visit each swapped pair once; controls are disjoint from
                // targets, so both members agree on the control pattern.
                if i < j && i & cmask == want {
                    state.swap(i, j);
                }
            }
        }
        Gate::Multiplexed { selector, target, payloads } => {
            let tmask = 1usize << target;
            for i in 0..state.len() {
                if i & tmask == 0 {
                    let mut v = 0usize;
                    for (k, &q) in selector.iter().enumerate() {
                        v |= ((i >> q) & 1) << k;
                    }
                    let m = &payloads[v].0;
                    let j = i | tmask;
                    let (a, b) = (state[i], state[j]);
                    state[i] = m[0][0] * a + m[0][1] * b;
                    state[j] = m[1][0] * a + m[1][1] * b;
                }
            }
        }
    }
}

impl Circuit {
    /// Runs the circuit on a state vector, returning the evolved state.
    /// The input length must be `2^total_qubits`, and the circuit must stay
    /// under the [`APPLY_CAP`] qubit cap.
    pub fn apply_to_state(&self, state: &[Complex64]) -> Result<StateVector> {
        let total = self.layout().total_qubits();
        if total as u32 > APPLY_CAP {
            return Err(CircuitError::SimulationCapExceeded { qubits: total, cap: APPLY_CAP });
        }
        let expected = 1usize << total;
        if state.len() != expected {
            return Err(CircuitError::BadStateLength { expected, found: state.len() });
        }
        let mut out = state.to_vec();
        for gate in self.gates() {
            apply_gate(gate, &mut out);
        }
        Ok(out)
    }

    /// Evolves a single basis state.
    pub fn apply_to_basis_state(&self, basis: usize) -> Result<StateVector> {
        let total = self.layout().total_qubits();
        if total as u32 > APPLY_CAP {
            return Err(CircuitError::SimulationCapExceeded { qubits: total, cap: APPLY_CAP });
        }
        let dim = 1usize << total;
        if basis >= dim {
            return Err(CircuitError::QubitOutOfRange { qubit: basis, total: dim });
        }
        let mut state = vec![Complex64::new(0.0, 0.0); dim];
        state[basis] = Complex64::new(1.0, 0.0);
        for gate in self.gates() {
            apply_gate(gate, &mut state);
        }
        Ok(state)
    }

    /// Full unitary of the circuit, column by column.  Refused above `cap`
    /// qubits (see [`super::DEFAULT_UNITARY_CAP`]).
    pub fn to_unitary(&self, cap: u32) -> Result<DenseMatrix> {
        let total = self.layout().total_qubits();
        if total as u32 > cap {
            return Err(CircuitError::SimulationCapExceeded { qubits: total, cap });
        }
        let dim = 1usize << total;
        let columns: Vec<StateVector> = (0..dim)
            .into_par_iter()
            .map(|j| self.apply_to_basis_state(j).expect("cap already checked"))
            .collect();
        let mut u = DenseMatrix::zeros((dim, dim));
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                u[(i, j)] = v;
            }
        }
        Ok(u)
    }

    /// Exact `‖U†U − I‖_max`, measured without forming any matrix product:
    /// for every basis column `e_k`, runs the circuit forward and then the
    /// adjoint circuit, and compares against `e_k`.
    pub fn unitarity_residual(&self, cap: u32) -> Result<f64> {
        let total = self.layout().total_qubits();
        if total as u32 > cap {
            return Err(CircuitError::SimulationCapExceeded { qubits: total, cap });
        }
        let adjoint = self.adjoint();
        let dim = 1usize << total;
        let residual = (0..dim)
            .into_par_iter()
            .map(|k| {
                let forward = self.apply_to_basis_state(k).expect("cap already checked");
                let back = adjoint.apply_to_state(&forward).expect("cap already checked");
                back.iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        let expect = if i == k { 1.0 } else { 0.0 };
                        (v - Complex64::new(expect, 0.0)).norm()
                    })
                    .fold(0.0f64, f64::max)
            })
            .reduce(|| 0.0f64, f64::max);
        Ok(residual)
    }

    /// `‖U − U†‖_max` of the circuit's unitary.
    pub fn hermiticity_residual(&self, cap: u32) -> Result<f64> {
        let u = self.to_unitary(cap)?;
        let dim = u.dim().0;
        let mut residual = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                residual = residual.max((u[(i, j)] - u[(j, i)].conj()).norm());
            }
        }
        Ok(residual)
    }

    /// Unitary restricted to the subspace where `zero_qubits` are all `|0⟩`.
    ///
    /// Returns the restricted matrix together with the largest amplitude
    /// observed outside the subspace (the *leakage*); callers comparing a
    /// decomposed circuit against its original on the ancilla-clean sector
    /// should check the leakage is negligible.
    pub fn restricted_unitary(&self, zero_qubits: &[usize], cap: u32) -> Result<(DenseMatrix, f64)> {
        let total = self.layout().total_qubits();
        if total as u32 > cap {
            return Err(CircuitError::SimulationCapExceeded { qubits: total, cap });
        }
        let mut zero_mask = 0usize;
        for &q in zero_qubits {
            if q >= total {
                return Err(CircuitError::QubitOutOfRange { qubit: q, total });
            }
            zero_mask |= 1 << q;
        }
        let free: Vec<usize> = (0..total).filter(|q| zero_mask & (1 << q) == 0).collect();
        let sub_dim = 1usize << free.len();
        let expand = |sub: usize| -> usize {
            let mut full = 0usize;
            for (k, &q) in free.iter().enumerate() {
                full |= ((sub >> k) & 1) << q;
            }
            full
        };

        let columns: Vec<(StateVector, f64)> = (0..sub_dim)
            .into_par_iter()
            .map(|sub_j| {
                let state =
                    self.apply_to_basis_state(expand(sub_j)).expect("cap already checked");
                let mut col = vec![Complex64::new(0.0, 0.0); sub_dim];
                let mut leak = 0.0f64;
                for (full_i, &v) in state.iter().enumerate() {
                    if full_i & zero_mask == 0 {
                        let mut sub_i = 0usize;
                        for (k, &q) in free.iter().enumerate() {
                            sub_i |= ((full_i >> q) & 1) << k;
                        }
                        col[sub_i] = v;
                    } else {
                        leak = leak.max(v.norm());
                    }
                }
                (col, leak)
            })
            .collect();

        let mut u = DenseMatrix::zeros((sub_dim, sub_dim));
        let mut leakage = 0.0f64;
        for (j, (col, leak)) in columns.iter().enumerate() {
            leakage = leakage.max(*leak);
            for (i, &v) in col.iter().enumerate() {
                u[(i, j)] = v;
            }
        }
        Ok((u, leakage))
    }
}
