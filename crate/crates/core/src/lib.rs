//! Multi-key torus-LWE boolean gates, two's-complement integer circuits and
//! encrypted linear regression.
//!
//! The stack, bottom up:
//!
//! * [`torus`]: discretized torus arithmetic and noise sampling, generic
//!   over the word size.
//! * [`lwe`]: multi-key LWE samples, extension to a party roster, the
//!   additive combinators with variance tracking, and the refresh oracle
//!   standing in for gate bootstrapping.
//! * [`gates`]: the seven basic gates on interchangeable backends.
//! * [`circuits`]: adder, subtractor, signed array multiplier and
//!   non-restoring array divider.
//! * [`metrics`]: gate counts, refresh depth and comparison tables.
//! * [`linreg`]: closed-form and gradient-descent training on encrypted data.
//! * [`protocol`]: participants, server and joint decryption.
//!
//! The refresh oracle holds every secret key. It reproduces the functional
//! behaviour of bootstrapping, not its security.

pub mod circuits;
pub mod error;
pub mod gates;
pub mod linreg;
pub mod lwe;
pub mod metrics;
pub mod protocol;
pub mod torus;

pub use error::{Error, Result};

pub type Torus32 = torus::Torus<u32>;
pub type Torus64 = torus::Torus<u64>;
pub type MkLweCiphertext32 = lwe::MkLweCiphertext<u32>;
pub type RefreshOracle32 = lwe::RefreshOracle<u32>;
pub type LweBackend32 = gates::LweBackend<u32>;
pub type IntCiphertext32 = circuits::IntCiphertext<MkLweCiphertext32>;
