//! Quantum circuit intermediate representation.
//!
//! Circuits are flat gate lists over a named [`RegisterLayout`].  The gate
//! vocabulary is deliberately small:
//!
//! * [`Gate::Unitary`] — arbitrary single-qubit unitary (checked to 1e-12),
//! * [`Gate::Cnot`] — CNOT with a positive (`|1⟩`-triggered) or negative
//!   (`|0⟩`-triggered) control,
//! * [`Gate::Swap`],
//! * [`Gate::Mcx`] — multi-controlled X with per-control polarity and one or
//!   more targets,
//! * [`Gate::Multiplexed`] — a uniformly controlled single-qubit gate: one
//!   payload per selector value.
//!
//! The last three are *composite*: [`Circuit::decompose`] rewrites every
//! circuit into `{single-qubit unitary, positive CNOT}` form (see
//! `decompose.rs`), which is the only form accepted by depth accounting and
//! the OpenQASM exporter.
//!
//! Qubit numbering is global and little-endian: qubit `q` carries bit `q` of
//! the basis index.  Registers are declared most-significant first, so the
//! first register in a layout owns the highest-order bits.

mod decompose;
mod qasm;
mod simulate;

pub use qasm::{export_qasm, import_qasm, import_qasm_with_layout};

use crate::numerics::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap (total qubits) for [`Circuit::to_unitary`].
pub const DEFAULT_UNITARY_CAP: u32 = 14;
/// Hard cap (total qubits) for [`Circuit::apply_to_state`].
pub const APPLY_CAP: u32 = 26;
/// Unitarity tolerance enforced on every 2×2 payload.
pub const PAYLOAD_UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a {total}-qubit layout")]
    QubitOutOfRange { qubit: usize, total: usize },
    #[error("qubit {qubit} used more than once by a single gate")]
    DuplicateQubit { qubit: usize },
    #[error("2x2 payload is not unitary (residual {residual:.3e} > {PAYLOAD_UNITARITY_TOL:.0e})")]
    NotUnitary { residual: f64 },
    #[error("multiplexed gate with {selectors} selector qubits needs {expected} payloads, found {found}")]
    PayloadCountMismatch { selectors: usize, expected: usize, found: usize },
    #[error("multi-controlled X with no targets")]
    EmptyTargets,
    #[error("circuit contains composite gates ({kind}); call decompose() first")]
    MustDecomposeFirst { kind: &'static str },
    #[error("decomposition needs {needed} pool ancilla(s) but the layout provides {available}")]
    PoolExhausted { needed: usize, available: usize },
    #[error("{qubits}-qubit circuit exceeds the simulation cap of {cap} qubits")]
    SimulationCapExceeded { qubits: usize, cap: u32 },
    #[error("no register named '{name}' in the layout")]
    BadRegister { name: String },
    #[error("register '{name}' declared twice")]
    DuplicateRegister { name: String },
    #[error("register name '{name}' is not a valid identifier")]
    BadRegisterName { name: String },
    #[error("state vector has length {found}, expected {expected}")]
    BadStateLength { expected: usize, found: usize },
    #[error("QASM line {line}: {message}")]
    Qasm { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, CircuitError>;

/// 2×2 complex matrix wrapper with unitarity checking and the constructors
/// needed by synthesis and decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const fn raw(m: [[Complex64; 2]; 2]) -> Self {
        Mat2(m)
    }

    /// Validating constructor: entries finite, `‖M†M − I‖_max ≤ 1e-12`.
    pub fn unitary(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let candidate = Mat2(m);
        let residual = candidate.unitarity_residual();
        if !residual.is_finite() || residual > PAYLOAD_UNITARITY_TOL {
            return Err(CircuitError::NotUnitary { residual });
        }
        Ok(candidate)
    }

    pub fn unitarity_residual(&self) -> f64 {
        let m = &self.0;
        let dag = self.dagger().0;
        let mut residual = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    acc += dag[i][k] * m[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                residual = residual.max((acc - Complex64::new(expect, 0.0)).norm());
            }
        }
        residual
    }

    pub fn identity() -> Self {
        Mat2([
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
    }

    pub fn x() -> Self {
        Mat2([
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Mat2([
            [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        ])
    }

    pub fn t_gate() -> Self {
        Mat2([
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
        ])
    }

    pub fn t_dagger() -> Self {
        Mat2::t_gate().dagger()
    }

    /// Rotation about Y: `[[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Mat2([
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ])
    }

    /// Rotation about Z: `diag(e^{−iθ/2}, e^{iθ/2})`.
    pub fn rz(theta: f64) -> Self {
        Mat2([
            [Complex64::from_polar(1.0, -theta / 2.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)],
        ])
    }

    /// Global phase `diag(e^{iγ}, e^{iγ})`.
    pub fn global_phase(gamma: f64) -> Self {
        let p = Complex64::from_polar(1.0, gamma);
        Mat2([
            [p, Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), p],
        ])
    }

    /// Relative phase on `|1⟩`: `diag(1, e^{iδ})`.
    pub fn phase_on_one(delta: f64) -> Self {
        Mat2([
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, delta)],
        ])
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn mul(&self, rhs: &Mat2) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    pub fn max_abs_diff(&self, rhs: &Mat2) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - rhs.0[i][j]).norm());
            }
        }
        d
    }
}

/// One gate over global qubit indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Single-qubit unitary.
    Unitary { qubit: usize, matrix: Mat2 },
    /// CNOT; `positive == false` triggers on the control being `|0⟩`.
    Cnot { control: usize, target: usize, positive: bool },
    /// Swap of two qubits.
    Swap { a: usize, b: usize },
    /// Multi-controlled X: flips every target when all controls match their
    /// polarity (`true` = `|1⟩`).
    Mcx { controls: Vec<(usize, bool)>, targets: Vec<usize> },
    /// Uniformly controlled single-qubit gate: applies
    /// `payloads[v]` to `target`, where bit `k` of `v` is read from
    /// `selector[k]`.
    Multiplexed { selector: Vec<usize>, target: usize, payloads: Vec<Mat2> },
}

impl Gate {
    pub fn x(qubit: usize) -> Gate {
        Gate::Unitary { qubit, matrix: Mat2::x() }
    }

    /// All qubits the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Unitary { qubit, .. } => vec![*qubit],
            Gate::Cnot { control, target, .. } => vec![*control, *target],
            Gate::Swap { a, b } => vec![*a, *b],
            Gate::Mcx { controls, targets } => controls
                .iter()
                .map(|&(q, _)| q)
                .chain(targets.iter().copied())
                .collect(),
            Gate::Multiplexed { selector, target, .. } => {
                selector.iter().copied().chain(std::iter::once(*target)).collect()
            }
        }
    }

    /// Whether the gate belongs to the `{U(2), positive CNOT}` target set.
    pub fn is_elementary(&self) -> bool {
        matches!(self, Gate::Unitary { .. } | Gate::Cnot { positive: true, .. })
    }

    fn composite_kind(&self) -> Option<&'static str> {
        match self {
            Gate::Unitary { .. } => None,
            Gate::Cnot { positive: true, .. } => None,
            Gate::Cnot { positive: false, .. } => Some("negative-control CNOT"),
            Gate::Swap { .. } => Some("SWAP"),
            Gate::Mcx { .. } => Some("multi-controlled X"),
            Gate::Multiplexed { .. } => Some("multiplexed single-qubit gate"),
        }
    }

    /// Adjoint of the gate (self-inverse kinds return a clone).
    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::Unitary { qubit, matrix } => {
                Gate::Unitary { qubit: *qubit, matrix: matrix.dagger() }
            }
            Gate::Multiplexed { selector, target, payloads } => Gate::Multiplexed {
                selector: selector.clone(),
                target: *target,
                payloads: payloads.iter().map(Mat2::dagger).collect(),
            },
            other => other.clone(),
        }
    }

    fn validate(&self, total: usize) -> Result<()> {
        let qubits = self.qubits();
        let mut seen = std::collections::BTreeSet::new();
        for &q in &qubits {
            if q >= total {
                return Err(CircuitError::QubitOutOfRange { qubit: q, total });
            }
            if !seen.insert(q) {
                return Err(CircuitError::DuplicateQubit { qubit: q });
            }
        }
        match self {
            Gate::Unitary { matrix, .. } => {
                Mat2::unitary(matrix.0)?;
            }
            Gate::Mcx { targets, .. } => {
                if targets.is_empty() {
                    return Err(CircuitError::EmptyTargets);
                }
            }
            Gate::Multiplexed { selector, payloads, .. } => {
                let expected = 1usize
                    .checked_shl(selector.len() as u32)
                    .ok_or(CircuitError::PayloadCountMismatch {
                        selectors: selector.len(),
                        expected: usize::MAX,
                        found: payloads.len(),
                    })?;
                if payloads.len() != expected {
                    return Err(CircuitError::PayloadCountMismatch {
                        selectors: selector.len(),
                        expected,
                        found: payloads.len(),
                    });
                }
                for p in payloads {
                    Mat2::unitary(p.0)?;
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// One named register inside a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Register {
    pub name: String,
    pub size: usize,
    /// Global index of the register's least significant qubit.
    pub offset: usize,
}

/// Ordered set of named registers.  The first register is the most
/// significant: reading a basis index in binary, its bits come first.
/// Zero-sized registers are allowed (they simply own no qubits).
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
    total: usize,
}

impl RegisterLayout {
    pub fn new(specs: &[(&str, usize)]) -> Result<Self> {
        let total: usize = specs.iter().map(|&(_, size)| size).sum();
        let mut names = std::collections::BTreeSet::new();
        let mut registers = Vec::with_capacity(specs.len());
        let mut next_top = total;
        for &(name, size) in specs {
            if !is_identifier(name) {
                return Err(CircuitError::BadRegisterName { name: name.to_string() });
            }
            if !names.insert(name.to_string()) {
                return Err(CircuitError::DuplicateRegister { name: name.to_string() });
            }
            next_top -= size;
            registers.push(Register { name: name.to_string(), size, offset: next_top });
        }
        Ok(RegisterLayout { registers, total })
    }

    pub fn total_qubits(&self) -> usize {
        self.total
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    /// Global index of bit `bit` (LSB first) of register `name`; panics on a
    /// bad name or bit, which is a programming error rather than bad input.
    pub fn qubit(&self, name: &str, bit: usize) -> usize {
        let reg = self
            .register(name)
            .unwrap_or_else(|| panic!("no register named '{name}'"));
        assert!(bit < reg.size, "bit {bit} out of range for register '{name}' of size {}", reg.size);
        reg.offset + bit
    }

    /// All qubits of a register, least significant first.
    pub fn qubits(&self, name: &str) -> Vec<usize> {
        let reg = self
            .register(name)
            .unwrap_or_else(|| panic!("no register named '{name}'"));
        (reg.offset..reg.offset + reg.size).collect()
    }

    /// Basis index with the listed registers set to the given values and all
    /// other registers zero.
    pub fn basis_index(&self, assignments: &[(&str, usize)]) -> usize {
        let mut index = 0usize;
        for &(name, value) in assignments {
            let reg = self
                .register(name)
                .unwrap_or_else(|| panic!("no register named '{name}'"));
            assert!(
                reg.size == 64 || value < (1usize << reg.size),
                "value {value} does not fit register '{name}' of size {}",
                reg.size
            );
            index |= value << reg.offset;
        }
        index
    }

    /// Value held by a register inside a basis index.
    pub fn register_value(&self, basis: usize, name: &str) -> usize {
        let reg = self
            .register(name)
            .unwrap_or_else(|| panic!("no register named '{name}'"));
        (basis >> reg.offset) & ((1usize << reg.size) - 1)
    }

    /// New layout with an extra register prepended at the most significant
    /// end; existing global indices are unchanged.
    pub fn with_register_front(&self, name: &str, size: usize) -> Result<Self> {
        if !is_identifier(name) {
            return Err(CircuitError::BadRegisterName { name: name.to_string() });
        }
        if self.register(name).is_some() {
            return Err(CircuitError::DuplicateRegister { name: name.to_string() });
        }
        let mut registers = Vec::with_capacity(self.registers.len() + 1);
        registers.push(Register { name: name.to_string(), size, offset: self.total });
        registers.extend(self.registers.iter().cloned());
        Ok(RegisterLayout { registers, total: self.total + size })
    }

    pub fn to_json(&self) -> String {
        let dto = LayoutDto {
            registers: self
                .registers
                .iter()
                .map(|r| RegisterDto { name: r.name.clone(), size: r.size })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("layout serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: LayoutDto =
            serde_json::from_str(text).map_err(|e| CircuitError::Qasm {
                line: 0,
                message: format!("layout JSON: {e}"),
            })?;
        let specs: Vec<(&str, usize)> =
            dto.registers.iter().map(|r| (r.name.as_str(), r.size)).collect();
        RegisterLayout::new(&specs)
    }
}

#[derive(Serialize, Deserialize)]
struct LayoutDto {
    registers: Vec<RegisterDto>,
}

#[derive(Serialize, Deserialize)]
struct RegisterDto {
    name: String,
    size: usize,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A gate list over a register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    layout: RegisterLayout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout) -> Self {
        Circuit { layout, gates: Vec::new() }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Appends a gate after validating it against the layout.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.layout.total_qubits())?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// True when every gate is in the `{U(2), positive CNOT}` target set.
    pub fn is_elementary(&self) -> bool {
        self.gates.iter().all(Gate::is_elementary)
    }

    /// First composite gate kind, if any.
    pub(crate) fn first_composite(&self) -> Option<&'static str> {
        self.gates.iter().find_map(Gate::composite_kind)
    }

    /// Reversed circuit with each gate conjugated; `c.adjoint()` composed
    /// with `c` is the identity.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    /// Circuit depth under as-soon-as-possible scheduling: gates acting on
    /// disjoint qubits share a layer.  Only defined for elementary circuits;
    /// composite gates must be decomposed first so that depth reflects the
    /// actual gate set.
    pub fn depth(&self) -> Result<usize> {
        if let Some(kind) = self.first_composite() {
            return Err(CircuitError::MustDecomposeFirst { kind });
        }
        let mut last_layer = vec![0usize; self.layout.total_qubits()];
        let mut depth = 0usize;
        for gate in &self.gates {
            let layer = gate
                .qubits()
                .iter()
                .map(|&q| last_layer[q])
                .max()
                .unwrap_or(0)
                + 1;
            for q in gate.qubits() {
                last_layer[q] = layer;
            }
            depth = depth.max(layer);
        }
        Ok(depth)
    }
}
