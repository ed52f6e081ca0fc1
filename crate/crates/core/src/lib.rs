//! Process-algebra toolkit for ACP extended with shadow constants and the
//! entanglement merge, with a verifier and a statevector simulator for the
//! alternating qubit protocol.
//!
//! - [`term`]: data, labels, process terms, recursive specifications.
//! - [`syntax`]: the `.qacp` language (parser, resolver, pretty printer).
//! - [`semantics`]: operational semantics, exploration, linearization, `.aut` I/O.
//! - [`equivalence`]: strong and branching bisimulation, quotients, τ-cluster collapse.
//! - [`qaqp`]: the protocol model and its verification pipeline.
//! - [`qsim`]: the concrete protocol on a simulated quantum register.
//! - [`cli`]: the `qacp` command line.

pub mod cli;
pub mod equivalence;
pub mod error;
pub mod qaqp;
pub mod qsim;
pub mod semantics;
pub mod syntax;
pub mod term;

pub use error::{Error, Result};
