//! Program-extension computability logic.
//!
//! Programs are lists of atomic programs `name [x...] [y...]`. A rule (an
//! irreducible extended program) says that whenever its premise list can be
//! matched inside a proof program, its conclusion may be appended. This crate
//! checks proofs written in that style, searches for new ones, encodes
//! programs as integer matrices, executes programs over concrete values, and
//! analyses the fully discrete iterated maps used by the `nat` application.

pub mod apps;
pub mod dynsys;
pub mod kernel;
pub mod lists;
pub mod matrix;
pub mod model;
pub mod proofio;
pub mod prover;
pub mod runtime;

pub use kernel::{Iep, Store};
pub use model::{AppSignature, AtomicProgram, Label, MachineParams, ProgramList};
pub use proofio::{check_proof, check_theorem, parse_proof, parse_theorem, ProofDocument};

/// Machine natural numbers.
pub type Nat = u64;
/// Word type used by the bundled iterated maps.
pub type Word = u64;
