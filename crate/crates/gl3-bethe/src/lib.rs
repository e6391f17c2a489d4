//! Exact-arithmetic toolkit for GL(3)-invariant rational spin chains.
//!
//! Everything here is computed over arbitrary-precision rationals — no floats,
//! no tolerances. The crate builds twisted, inhomogeneous monodromy matrices in
//! concrete finite representations, constructs off-shell Bethe vectors and their
//! duals from explicit partition sums, and machine-checks a family of operator
//! identities by exact equality of state vectors:
//!
//! * the RTT exchange relation for the rational GL(3) R-matrix,
//! * the action of every monodromy entry `T_ij(z)` on a Bethe vector,
//! * equivalence of the partition-sum and recursive constructions,
//! * the composite-model decomposition of (dual) Bethe vectors into
//!   bilinear combinations of partial-chain vectors,
//! * term-by-term cancellation ledgers behind the composite action formulas,
//! * the coproduct property of the associated weight functions, and
//! * the transposition / reflection symmetries of the construction.
//!
//! Each capability has a runnable demo under `examples/`; `cargo run --example
//! rtt_check` is a good place to start. The `verify` binary drives the same
//! checks from a JSON config and writes a machine-readable report.

pub mod ratfun;
pub mod partitions;
mod linalg;
pub mod rep;
pub mod bethe;
pub mod actions;
pub mod composite;
pub mod cli;

mod error;
mod verdict;

pub use error::{Error, Result};
pub use verdict::{Verdict, Witness};
