//! Bootstrapped binary gates behind a backend abstraction.
//!
//! Three backends share one interface: [`ClearBackend`] evaluates plain
//! booleans and serves as the correctness oracle, [`DepthBackend`] tracks
//! the refresh depth of every wire, and [`LweBackend`] runs the gates on
//! multi-key LWE ciphertexts.

mod clear;
mod counter;
mod depth;
mod lwe;

pub use clear::ClearBackend;
pub use counter::{GateCounter, GateCounts};
pub use depth::DepthBackend;
pub use lwe::{GateConstants, LweBackend};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Nand,
    Nor,
    Xor,
    Xnor,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        GateKind::And,
        GateKind::Or,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
    ];

    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            GateKind::And => a & b,
            GateKind::Or => a | b,
            GateKind::Nand => !(a & b),
            GateKind::Nor => !(a | b),
            GateKind::Xor => a ^ b,
            GateKind::Xnor => !(a ^ b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

/// A substrate on which boolean circuits are evaluated.
///
/// Every call to [`gate`](GateBackend::gate) is one bootstrapped gate and
/// costs exactly one refresh. [`not`](GateBackend::not) is free.
pub trait GateBackend: Sync {
    type Bit: Clone + Send + Sync;

    fn gate(&self, kind: GateKind, a: &Self::Bit, b: &Self::Bit) -> Result<Self::Bit>;

    fn not(&self, a: &Self::Bit) -> Result<Self::Bit>;

    /// Noiseless encoding of a public bit.
    fn constant(&self, m: bool) -> Self::Bit;

    fn counter(&self) -> &GateCounter;

    fn and(&self, a: &Self::Bit, b: &Self::Bit) -> Result<Self::Bit> {
        self.gate(GateKind::And, a, b)
    }

    fn or(&self, a: &Self::Bit, b: &Self::Bit) -> Result<Self::Bit> {
        self.gate(GateKind::Or, a, b)
    }

    fn nand(&self, a: &Self::Bit, b: &Self::Bit) -> Result<Self::Bit> {
        self.gate(GateKind::Nand, a, b)
    }

    fn nor(&self, a: &Self::Bit, b: &Self::Bit) -> Result<Self::Bit> {
        self.gate(GateKind::Nor, a, b)
    }

    fn xor(&self, a: &Self::Bit, b: &Self::Bit) -> Result<Self::Bit> {
        self.gate(GateKind::Xor, a, b)
    }

    fn xnor(&self, a: &Self::Bit, b: &Self::Bit) -> Result<Self::Bit> {
        self.gate(GateKind::Xnor, a, b)
    }
}
