use super::{GateBackend, GateCounter, GateKind};
use crate::error::Result;

/// Plaintext evaluation. Counts gates and refreshes exactly like the
/// encrypted backend so cost measurements can run without cryptography.
#[derive(Debug, Default)]
pub struct ClearBackend {
    counter: GateCounter,
}

impl ClearBackend {
    pub fn new() -> Self {
        Self::default()
    }
}

impl GateBackend for ClearBackend {
    type Bit = bool;

    fn gate(&self, kind: GateKind, a: &bool, b: &bool) -> Result<bool> {
        self.counter.record_gate(kind);
        self.counter.record_refresh();
        Ok(kind.eval(*a, *b))
    }

    fn not(&self, a: &bool) -> Result<bool> {
        self.counter.record_not();
        Ok(!*a)
    }

    fn constant(&self, m: bool) -> bool {
        m
    }

    fn counter(&self) -> &GateCounter {
        &self.counter
    }
}
