//! Block-encoding synthesis.
//!
//! Turns validated dictionaries into complete block-encoding circuits and
//! checks them by dense simulation:
//!
//! * [`prepare_state`] — binary-tree multiplexed-rotation state preparation,
//! * [`select_f`] — table-driven XOR writer (`|k⟩|z⟩ → |k⟩|z ⊕ f(k)⟩`),
//! * [`build_oc`] / [`build_oc_hermitian`] — the column oracle that routes
//!   `|j⟩` to `|c_l(j)⟩` (or flags the deletion qubit),
//! * [`assemble`] / [`assemble_hermitian`] — full prepare–route–unprepare
//!   circuits whose top-left block is `A/α`,
//! * [`export_lcu`] — tensor-of-X linear-combination form for shift-structured
//!   dictionaries,
//! * [`frobenius_baseline`] — the row-norm construction with `α = ‖A‖_F`,
//! * [`verify_block_encoding`] — measured `ε`, unitarity and Hermiticity
//!   residuals against the source matrix.

mod assemble;
mod baseline;
mod lcu;
mod oracle;
mod prepare;
mod select;
mod verify;

pub use assemble::{assemble, assemble_hermitian};
pub use baseline::frobenius_baseline;
pub use lcu::{export_lcu, LcuForm};
pub use oracle::{build_oc, build_oc_hermitian, oc_hermitian_layout, oc_layout};
pub use prepare::prepare_state;
pub use select::select_f;
pub use verify::{
    verify_block_encoding, verify_block_encoding_sampled, VerificationReport,
    VERIFY_SAMPLE_COLUMNS,
};

use crate::circuit::{Circuit, CircuitError, RegisterLayout};
use crate::dictionary::{Dictionary, DictionaryError, HermitianDictionary};
use crate::sparse::{SparseError, SparseMatrix};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("amplitudes have squared norm {norm_squared:.12}, expected 1 within 1e-10")]
    NotNormalized { norm_squared: f64 },
    #[error("{count} amplitudes do not fit a {capacity}-state register")]
    TooManyAmplitudes { count: usize, capacity: usize },
    #[error("the layout has no qubits to synthesize over")]
    EmptyLayout,
    #[error("table index {index} does not fit in {bits} index bit(s)")]
    TableIndexOutOfRange { index: u64, bits: u32 },
    #[error("table word {word} at index {index} does not fit in {bits} word bit(s)")]
    TableWordOutOfRange { index: u64, word: u64, bits: u32 },
    #[error("table entry at index {index} stores the all-zero word; omit it instead")]
    TableWordZero { index: u64 },
    #[error("table lists index {index} twice")]
    TableDuplicateIndex { index: u64 },
    #[error(
        "item {item} is not a tensor-of-X shift: columns {column_a} and {column_b} \
         give different XOR masks"
    )]
    NotLcuExpressible { item: usize, column_a: usize, column_b: usize },
    #[error("item {item} does not cover column {column}; the tensor-of-X form needs every column")]
    LcuIncompleteCoverage { item: usize, column: usize },
    #[error("matrix is identically zero; no positive subnormalization exists")]
    ZeroMatrix,
    #[error("layout has no register named '{name}'")]
    MissingRegister { name: String },
    #[error("register '{name}' has {actual} qubit(s), expected {expected}")]
    RegisterSizeMismatch { name: String, actual: usize, expected: usize },
    #[error("matrix acts on {actual} qubit(s) but the encoding's system register has {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Dictionary(#[from] DictionaryError),
    #[error(transparent)]
    Sparse(#[from] SparseError),
}

pub type Result<T> = std::result::Result<T, SynthesisError>;

/// What a block encoding was synthesized from.  Kept alongside the circuit so
/// verification can re-derive the target matrix and knows which structural
/// claims (e.g. Hermiticity) to check.
#[derive(Debug, Clone)]
pub enum EncodingSource {
    Dictionary(Dictionary),
    Hermitian(HermitianDictionary),
    Frobenius(SparseMatrix),
}

impl EncodingSource {
    /// Short lowercase tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            EncodingSource::Dictionary(_) => "dictionary",
            EncodingSource::Hermitian(_) => "hermitian",
            EncodingSource::Frobenius(_) => "frobenius",
        }
    }

    /// The matrix the encoding claims to embed.
    pub fn target_matrix(&self) -> Result<SparseMatrix> {
        match self {
            EncodingSource::Dictionary(d) => Ok(d.to_matrix()?),
            EncodingSource::Hermitian(hd) => Ok(hd.to_matrix()?),
            EncodingSource::Frobenius(a) => Ok(a.clone()),
        }
    }
}

/// A unitary circuit embedding `A/α` as its top-left block: postselecting all
/// ancilla registers on `|0…0⟩` leaves the system register transformed by
/// `A/α`.
#[derive(Debug, Clone)]
pub struct BlockEncoding {
    pub circuit: Circuit,
    /// Subnormalization `α > 0`.
    pub alpha: f64,
    /// Number of ancilla qubits (everything except the system register) before
    /// any decomposition pool is added.
    pub ancilla_count: usize,
    pub source: EncodingSource,
}

impl BlockEncoding {
    pub fn layout(&self) -> &RegisterLayout {
        self.circuit.layout()
    }

    pub fn total_qubits(&self) -> usize {
        self.circuit.layout().total_qubits()
    }

    /// Width of the system (data) register.
    pub fn system_qubits(&self) -> usize {
        self.circuit
            .layout()
            .register("system")
            .map(|r| r.size)
            .unwrap_or(0)
    }
}

/// Sparse truth table of a Boolean function `f : [2^index_bits) → [2^word_bits)`.
///
/// Only inputs with `f(k) ≠ 0` are stored; every unlisted input maps to the
/// all-zero word, so XOR-writing `f(k)` is a no-op there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFunctionTable {
    index_bits: u32,
    word_bits: u32,
    nonzeros: BTreeMap<u64, u64>,
}

fn fits(value: u64, bits: u32) -> bool {
    bits >= 64 || value < (1u64 << bits)
}

impl BooleanFunctionTable {
    /// Builds a table, rejecting out-of-range indices/words, explicit zero
    /// words, and duplicate indices.
    pub fn new(
        index_bits: u32,
        word_bits: u32,
        entries: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self> {
        let mut nonzeros = BTreeMap::new();
        for (index, word) in entries {
            if !fits(index, index_bits) {
                return Err(SynthesisError::TableIndexOutOfRange { index, bits: index_bits });
            }
            if !fits(word, word_bits) {
                return Err(SynthesisError::TableWordOutOfRange { index, word, bits: word_bits });
            }
            if word == 0 {
                return Err(SynthesisError::TableWordZero { index });
            }
            if nonzeros.insert(index, word).is_some() {
                return Err(SynthesisError::TableDuplicateIndex { index });
            }
        }
        Ok(BooleanFunctionTable { index_bits, word_bits, nonzeros })
    }

    pub fn index_bits(&self) -> u32 {
        self.index_bits
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    /// Number of stored (nonzero) entries.
    pub fn len(&self) -> usize {
        self.nonzeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nonzeros.is_empty()
    }

    /// `f(k)`, zero for unlisted inputs.
    pub fn lookup(&self, index: u64) -> u64 {
        self.nonzeros.get(&index).copied().unwrap_or(0)
    }

    /// Stored entries in increasing index order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.nonzeros.iter().map(|(&k, &w)| (k, w))
    }
}
