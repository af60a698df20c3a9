//! Flexible representation of quantum audio (FRQA): encoding, reversible
//! signal operations, and gate-level cost accounting.

pub mod audio;
pub mod error;
pub mod gates;
pub mod simulator;
pub mod frqa;
pub mod ops;
pub mod cli;

pub use error::{FrqaError, Result};
