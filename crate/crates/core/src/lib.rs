//! Verification toolkit for no-go results on unknown qubits: state algebra,
//! gate constructors, realizability checks, hybrid-machine fidelity
//! optimization and a small machine description language.

pub mod algebra;
pub mod error;
pub mod fidelity;
pub mod dsl;
pub mod gates;
pub mod seed;
pub mod states;
pub mod verifier;

pub use error::{Error, Result};
