//! OpenQASM 2.0 serialisation of elementary circuits.
//!
//! The exporter accepts only decomposed circuits (`{U(2), positive CNOT}`)
//! and emits one `qreg` per non-empty layout register (in layout order, so
//! the declaration order encodes significance), `u(θ,φ,λ)` for single-qubit
//! unitaries and `cx` for CNOTs.  `u` leaves a gate's global phase behind,
//! so the exporter accumulates the residual phase of every emitted gate and
//! records the total in a `// global-phase: <radians>` comment; the importer
//! reapplies it as an explicit phase gate, which makes
//! export → import an exact round trip at the unitary level.
//!
//! The importer understands exactly the exported dialect (plus `u3`/`U` as
//! synonyms of `u`, `pi`-expressions in angles, and blank/comment lines) and
//! reports any other construct with its line number.

use super::decompose::zyz;
use super::{Circuit, CircuitError, Gate, Mat2, RegisterLayout, Result};
use crate::numerics::Complex64;

const GLOBAL_PHASE_PREFIX: &str = "// global-phase:";

/// Serialises an elementary circuit as OpenQASM 2.0.
pub fn export_qasm(circuit: &Circuit) -> Result<String> {
    if let Some(kind) = circuit.first_composite() {
        return Err(CircuitError::MustDecomposeFirst { kind });
    }
    let layout = circuit.layout();
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    for reg in layout.registers() {
        if reg.size > 0 {
            out.push_str(&format!("qreg {}[{}];\n", reg.name, reg.size));
        }
    }

    let qubit_name = |q: usize| -> String {
        let reg = layout
            .registers()
            .iter()
            .find(|r| q >= r.offset && q < r.offset + r.size)
            .expect("validated gate qubits always fall inside a register");
        format!("{}[{}]", reg.name, q - reg.offset)
    };

    let mut body = String::new();
    let mut global_phase = 0.0f64;
    for gate in circuit.gates() {
        match gate {
            Gate::Unitary { qubit, matrix } => {
                let (delta, theta, phi, lambda) = zyz(matrix);
                // U = e^{iδ} Rz(φ) Ry(θ) Rz(λ) = e^{i(δ−(φ+λ)/2)} u(θ,φ,λ).
                global_phase += delta - (phi + lambda) / 2.0;
                if theta != 0.0 || phi != 0.0 || lambda != 0.0 {
                    body.push_str(&format!(
                        "u({},{},{}) {};\n",
                        theta,
                        phi,
                        lambda,
                        qubit_name(*qubit)
                    ));
                }
            }
            Gate::Cnot { control, target, positive: true } => {
                body.push_str(&format!(
                    "cx {},{};\n",
                    qubit_name(*control),
                    qubit_name(*target)
                ));
            }
            _ => unreachable!("elementary circuits contain only U(2) and positive CNOT"),
        }
    }
    if global_phase != 0.0 {
        out.push_str(&format!("{GLOBAL_PHASE_PREFIX} {global_phase}\n"));
    }
    out.push_str(&body);
    Ok(out)
}

/// Parses an OpenQASM 2.0 file produced by [`export_qasm`], building the
/// layout from the `qreg` declarations.
pub fn import_qasm(text: &str) -> Result<Circuit> {
    import_impl(text, None)
}

/// Like [`import_qasm`], but checks the declarations against a known layout
/// and uses it for the circuit (this keeps zero-sized registers, which QASM
/// cannot declare).
pub fn import_qasm_with_layout(text: &str, layout: &RegisterLayout) -> Result<Circuit> {
    import_impl(text, Some(layout))
}

fn import_impl(text: &str, expected_layout: Option<&RegisterLayout>) -> Result<Circuit> {
    let err = |line: usize, message: String| CircuitError::Qasm { line, message };

    let mut global_phase = 0.0f64;
    let mut declared: Vec<(String, usize)> = Vec::new();
    let mut statements: Vec<(usize, String)> = Vec::new();
    let mut saw_header = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(GLOBAL_PHASE_PREFIX) {
            global_phase = rest.trim().parse::<f64>().map_err(|_| {
                err(line_no, format!("bad global phase value '{}'", rest.trim()))
            })?;
            continue;
        }
        if line.starts_with("//") {
            continue;
        }
        let statement = line
            .strip_suffix(';')
            .ok_or_else(|| err(line_no, "statement does not end with ';'".to_string()))?
            .trim()
            .to_string();
        if !saw_header {
            if statement != "OPENQASM 2.0" {
                return Err(err(line_no, "expected 'OPENQASM 2.0;'".to_string()));
            }
            saw_header = true;
            continue;
        }
        if statement.starts_with("include") {
            continue;
        }
        if let Some(rest) = statement.strip_prefix("qreg ") {
            let (name, size) = parse_qreg(rest).map_err(|m| err(line_no, m))?;
            declared.push((name, size));
            continue;
        }
        statements.push((line_no, statement));
    }
    if !saw_header {
        return Err(err(1, "missing 'OPENQASM 2.0;' header".to_string()));
    }

    let layout = match expected_layout {
        Some(layout) => {
            let nonzero: Vec<(String, usize)> = layout
                .registers()
                .iter()
                .filter(|r| r.size > 0)
                .map(|r| (r.name.clone(), r.size))
                .collect();
            if nonzero != declared {
                return Err(err(
                    0,
                    format!(
                        "declared registers {declared:?} do not match the expected layout \
                         {nonzero:?}"
                    ),
                ));
            }
            layout.clone()
        }
        None => {
            let specs: Vec<(&str, usize)> =
                declared.iter().map(|(n, s)| (n.as_str(), *s)).collect();
            RegisterLayout::new(&specs)?
        }
    };

    let resolve = |token: &str, line_no: usize| -> Result<usize> {
        let open = token
            .find('[')
            .ok_or_else(|| err(line_no, format!("'{token}' is not a qubit reference")))?;
        if !token.ends_with(']') {
            return Err(err(line_no, format!("'{token}' is not a qubit reference")));
        }
        let name = &token[..open];
        let bit: usize = token[open + 1..token.len() - 1]
            .parse()
            .map_err(|_| err(line_no, format!("bad qubit index in '{token}'")))?;
        let reg = layout
            .register(name)
            .ok_or_else(|| err(line_no, format!("unknown register '{name}'")))?;
        if bit >= reg.size {
            return Err(err(
                line_no,
                format!("qubit index {bit} out of range for register '{name}'"),
            ));
        }
        Ok(reg.offset + bit)
    };

    let mut circuit = Circuit::new(layout.clone());
    for (line_no, statement) in statements {
        if let Some(args) = strip_gate(&statement, &["u", "u3", "U"]) {
            let (angles, operands) = args.map_err(|m| err(line_no, m))?;
            if angles.len() != 3 || operands.len() != 1 {
                return Err(err(line_no, "u takes three angles and one qubit".to_string()));
            }
            let qubit = resolve(&operands[0], line_no)?;
            let matrix = u3_matrix(angles[0], angles[1], angles[2]);
            circuit.push(Gate::Unitary { qubit, matrix })?;
        } else if let Some(args) = strip_gate(&statement, &["cx", "CX"]) {
            let (angles, operands) = args.map_err(|m| err(line_no, m))?;
            if !angles.is_empty() || operands.len() != 2 {
                return Err(err(line_no, "cx takes two qubits and no angles".to_string()));
            }
            let control = resolve(&operands[0], line_no)?;
            let target = resolve(&operands[1], line_no)?;
            circuit.push(Gate::Cnot { control, target, positive: true })?;
        } else {
            return Err(err(line_no, format!("unsupported statement '{statement}'")));
        }
    }
    if global_phase != 0.0 && layout.total_qubits() > 0 {
        circuit.push(Gate::Unitary { qubit: 0, matrix: Mat2::global_phase(global_phase) })?;
    }
    Ok(circuit)
}

/// `u(θ,φ,λ)` as defined by the standard library: top-left entry
/// `cos(θ/2)`, no global phase.
fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    Mat2([
        [
            Complex64::new(c, 0.0),
            -Complex64::from_polar(s, lambda),
        ],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(c, phi + lambda),
        ],
    ])
}

fn parse_qreg(rest: &str) -> std::result::Result<(String, usize), String> {
    let rest = rest.trim();
    let open = rest.find('[').ok_or_else(|| format!("bad qreg declaration '{rest}'"))?;
    if !rest.ends_with(']') {
        return Err(format!("bad qreg declaration '{rest}'"));
    }
    let name = rest[..open].trim().to_string();
    let size: usize = rest[open + 1..rest.len() - 1]
        .parse()
        .map_err(|_| format!("bad register size in '{rest}'"))?;
    if size == 0 {
        return Err("zero-sized qreg".to_string());
    }
    Ok((name, size))
}

/// Splits `name(a,b) q[0],r[1]` into angles and operand tokens when `name`
/// is one of `names`; returns `None` if the statement is a different gate.
#[allow(clippy::type_complexity)]
fn strip_gate<'a>(
    statement: &'a str,
    names: &[&str],
) -> Option<std::result::Result<(Vec<f64>, Vec<String>), String>> {
    let (head, rest) = match statement.find(|c: char| c == '(' || c.is_whitespace()) {
        Some(pos) => (&statement[..pos], statement[pos..].trim_start()),
        None => (statement, ""),
    };
    if !names.contains(&head) {
        return None;
    }
    Some((|| {
        let (angles, operand_text) = if let Some(stripped) = rest.strip_prefix('(') {
            let close = stripped
                .find(')')
                .ok_or_else(|| format!("missing ')' in '{statement}'"))?;
            let angle_text = &stripped[..close];
            let angles = angle_text
                .split(',')
                .map(parse_angle)
                .collect::<std::result::Result<Vec<f64>, String>>()?;
            (angles, stripped[close + 1..].trim())
        } else {
            (Vec::new(), rest)
        };
        let operands: Vec<String> = operand_text
            .split(',')
            .map(|t| t.trim().to_string())
            .filter(|t| !t.is_empty())
            .collect();
        if operands.is_empty() {
            return Err(format!("no operands in '{statement}'"));
        }
        Ok((angles, operands))
    })())
}

/// Parses a plain float or a simple `pi` expression
/// (`pi`, `-pi/2`, `3*pi/4`, `0.5*pi`, …).
fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, t),
    };
    let (mut value, after_pi) = if let Some(rest) = body.strip_prefix("pi") {
        (std::f64::consts::PI, rest.trim())
    } else if let Some(pos) = body.find("*pi") {
        let factor: f64 = body[..pos]
            .trim()
            .parse()
            .map_err(|_| format!("bad angle '{text}'"))?;
        (factor * std::f64::consts::PI, body[pos + 3..].trim())
    } else {
        return Err(format!("bad angle '{text}'"));
    };
    let mut rest = after_pi;
    if let Some(den) = rest.strip_prefix('/') {
        let d: f64 = den.trim().parse().map_err(|_| format!("bad angle '{text}'"))?;
        value /= d;
        rest = "";
    } else if let Some(num) = rest.strip_prefix('*') {
        let m: f64 = num.trim().parse().map_err(|_| format!("bad angle '{text}'"))?;
        value *= m;
        rest = "";
    }
    if !rest.is_empty() {
        return Err(format!("bad angle '{text}'"));
    }
    Ok(sign * value)
}
