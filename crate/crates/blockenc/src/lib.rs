//! Dictionary-based block encodings of sparse structured matrices.
//!
//! A block encoding embeds a (generally non-unitary) matrix `A` into the
//! top-left block of a larger unitary `U`, up to a subnormalization factor
//! `α`: projecting the ancilla registers of `U` onto `|0⟩` recovers `A/α`.
//! This crate compiles sparse matrices into such unitaries over the
//! `{U(2), CNOT}` gate set, taking advantage of repeated-value structure:
//! a matrix is first summarised as a *dictionary* of (value, column→row map)
//! items, and the circuit cost then scales with the number of items rather
//! than the number of nonzeros.
//!
//! Pipeline overview:
//!
//! * [`sparse`] — triplet matrices and MatrixMarket I/O;
//! * [`dictionary`] — the item representation, automatic construction
//!   (bipartite edge colouring keeps the item count minimal), and a
//!   symmetric variant for self-adjoint encodings;
//! * [`circuit`] — gate-level IR, dense simulation, decomposition to
//!   elementary gates, and OpenQASM 2.0 exchange;
//! * [`synthesis`] — state preparation, dictionary oracles, the assembled
//!   block encodings, a Frobenius-normalised baseline, and verification
//!   against the source matrix;
//! * [`resources`] — closed-form depth/ancilla models and measured-versus-
//!   model comparisons;
//! * [`applications`] — generators for circulant stencils, discretised 2-D
//!   Laplacians, and a family of banded eigenproblem matrices.

pub mod applications;
pub mod circuit;
pub mod dictionary;
pub mod numerics;
pub mod resources;
pub mod sparse;
pub mod synthesis;
#[doc(hidden)]
pub mod test_support;
