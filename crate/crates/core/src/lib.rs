//! `entrobound`: state-independent entropic uncertainty bounds for pairs of
//! quantum observables, computed from their unitary matrix of eigenbasis
//! overlaps.
//!
//! For observables A and B with eigenbases `{|a_i>}` and `{|b_j>}`, the matrix
//! `U_ji = <b_j|a_i>` is unitary. The textbook Maassen-Uffink bound
//! `H(A) + H(B) >= -2 log2 c` uses only the largest overlap magnitude
//! `c = max |U_ji|`. This crate computes the stronger bound
//!
//! ```text
//! H(A) + H(B) >= gamma_s = (-2s / (2 - s)) * log2 ||U||_{s -> s'}
//! ```
//!
//! for Hölder pairs `1/s + 1/s' = 1` with `s` in (1, 2), where
//! `||U||_{s -> s'}` is the operator norm from l^s to l^s'. The same quantity
//! bounds the Rényi entropy sum `H_{s/2}(A) + H_{s'/2}(B)`, where it is tight
//! for every `s`; the Shannon bound becomes tight as `s -> 2`.
//!
//! The norm itself has no closed form in general and is estimated by a
//! nonlinear power iteration ([`npim`]), cross-checked by Monte-Carlo sampling
//! and, for qubits, by a semi-closed analytic formula ([`qubit`]).
//!
//! Modules:
//! - [`linalg`]: complex vectors/matrices, l^p norms, Haar sampling, matrix
//!   file format.
//! - [`entropy`]: Shannon, Rényi and binary entropies plus the exact
//!   norm-to-entropy identities used as cross-checks.
//! - [`npim`]: the nonlinear power iteration norm estimator with multi-seed
//!   global search and convergence diagnostics.
//! - [`bounds`]: Maassen-Uffink, the tight bound, eigenstate baselines,
//!   Monte-Carlo entropy minima, dimension sweeps.
//! - [`qubit`]: the 2x2 canonical form, the critical angle and the
//!   semi-closed qubit bound.
//! - [`search`]: the scalar bracketing minimizers and root finder the modules
//!   above share.

#![forbid(unsafe_code)]
// negated comparisons like !(p >= 1.0) are deliberate: they reject NaN,
// which the suggested p < 1.0 would wave through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod entropy;
mod error;
pub mod linalg;
pub mod npim;
pub mod qubit;
pub mod search;

pub use bounds::BoundReport;
pub use error::{Error, Result};
pub use linalg::{AmplitudeVector, ComplexMatrix, HolderPair, OverlapUnitary};
pub use npim::{MonteCarloNorm, NormEstimate, NpimConfig};
pub use qubit::QubitBoundResult;
