use std::ops::Sub;
use std::sync::atomic::{AtomicU64, Ordering};

use super::GateKind;

/// Atomic instrumentation shared by all evaluations on one backend.
#[derive(Debug, Default)]
pub struct GateCounter {
    gates: [AtomicU64; 6],
    nots: AtomicU64,
    refreshes: AtomicU64,
    lwe_add: AtomicU64,
    lwe_sub: AtomicU64,
    lwe_mul: AtomicU64,
    mod_to_t: AtomicU64,
    layers: AtomicU64,
}

/// Point-in-time copy of a [`GateCounter`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub gates: [u64; 6],
    pub nots: u64,
    pub refreshes: u64,
    pub lwe_add: u64,
    pub lwe_sub: u64,
    pub lwe_mul: u64,
    pub mod_to_t: u64,
    pub layers: u64,
}

impl GateCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn record_gate(&self, kind: GateKind) {
        self.gates[kind.index()].fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_not(&self) {
        self.nots.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_refresh(&self) {
        self.refreshes.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_add(&self) {
        self.lwe_add.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_sub(&self) {
        self.lwe_sub.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_mul(&self) {
        self.lwe_mul.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_mod_to_t(&self) {
        self.mod_to_t.fetch_add(1, Ordering::Relaxed);
    }

    pub fn record_layers(&self, n: u64) {
        self.layers.fetch_add(n, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> GateCounts {
        let ld = |a: &AtomicU64| a.load(Ordering::Relaxed);
        GateCounts {
            gates: std::array::from_fn(|i| ld(&self.gates[i])),
            nots: ld(&self.nots),
            refreshes: ld(&self.refreshes),
            lwe_add: ld(&self.lwe_add),
            lwe_sub: ld(&self.lwe_sub),
            lwe_mul: ld(&self.lwe_mul),
            mod_to_t: ld(&self.mod_to_t),
            layers: ld(&self.layers),
        }
    }
}

impl GateCounts {
    /// Bootstrapped gates of all kinds.
    pub fn total_gates(&self) -> u64 {
        self.gates.iter().sum()
    }

    pub fn of(&self, kind: GateKind) -> u64 {
        self.gates[kind.index()]
    }
}

impl Sub for GateCounts {
    type Output = GateCounts;

    fn sub(self, rhs: GateCounts) -> GateCounts {
        GateCounts {
            gates: std::array::from_fn(|i| self.gates[i] - rhs.gates[i]),
            nots: self.nots - rhs.nots,
            refreshes: self.refreshes - rhs.refreshes,
            lwe_add: self.lwe_add - rhs.lwe_add,
            lwe_sub: self.lwe_sub - rhs.lwe_sub,
            lwe_mul: self.lwe_mul - rhs.lwe_mul,
            mod_to_t: self.mod_to_t - rhs.mod_to_t,
            layers: self.layers - rhs.layers,
        }
    }
}
