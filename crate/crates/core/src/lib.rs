//! Exact two-qubit simulation of entanglement-based quantum secure direct
//! communication with super dense coding.
//!
//! Alice prepares a random Bell-state carrier, encodes two message bits with
//! a carrier-dependent Pauli gate on her qubit, and sends both qubits to Bob
//! over two spatially separated channels. Bob applies `(H ⊗ I)·CNOT` and
//! measures. The crate simulates Pauli noise on both channels, eavesdropping
//! strategies, and provides exact enumeration oracles for every rate the
//! Monte Carlo runner estimates.

pub mod adversary;
pub mod channel;
pub mod codec;
pub mod error;
pub mod qcore;
pub mod session;

pub use error::{Error, Result};
