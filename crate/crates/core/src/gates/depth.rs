use super::{GateBackend, GateCounter, GateKind};
use crate::error::Result;

/// Propagates refresh depth instead of values: every gate output sits one
/// level above its deepest input, NOT and constants add nothing.
///
/// Circuits whose wiring does not depend on data, which is every circuit in
/// this crate, have the same depth on all inputs, so one pass measures it.
#[derive(Debug, Default)]
pub struct DepthBackend {
    counter: GateCounter,
}

impl DepthBackend {
    pub fn new() -> Self {
        Self::default()
    }
}

impl GateBackend for DepthBackend {
    type Bit = u32;

    fn gate(&self, kind: GateKind, a: &u32, b: &u32) -> Result<u32> {
        self.counter.record_gate(kind);
        self.counter.record_refresh();
        Ok((*a).max(*b) + 1)
    }

    fn not(&self, a: &u32) -> Result<u32> {
        self.counter.record_not();
        Ok(*a)
    }

    fn constant(&self, _m: bool) -> u32 {
        0
    }

    fn counter(&self) -> &GateCounter {
        &self.counter
    }
}
