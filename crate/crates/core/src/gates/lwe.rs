use std::sync::Arc;

use super::{GateBackend, GateCounter, GateKind};
use crate::error::Result;
use crate::lwe::{lwe_add, lwe_mul_const, lwe_sub, LweParams, MkLweCiphertext, RefreshOracle, Roster};
use crate::torus::{mod_to_t, Torus, TorusWord};

/// Torus offsets of the gate linear combinations, in eighths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateConstants {
    pub and: i64,
    pub or: i64,
    pub nand: i64,
    pub nor: i64,
    pub xnor: i64,
}

impl GateConstants {
    /// Constants whose four input phases all land on the intended side of
    /// the refresh band with a 1/8 margin.
    pub const fn corrected() -> Self {
        GateConstants {
            and: -1,
            or: 1,
            nand: 5,
            nor: 3,
            xnor: 4,
        }
    }

    /// NOR offset 1/8 and XNOR offset 1/4 as originally published. Kept so
    /// the resulting truth-table failures can be reproduced.
    pub const fn as_printed() -> Self {
        GateConstants {
            nor: 1,
            xnor: 2,
            ..Self::corrected()
        }
    }
}

impl Default for GateConstants {
    fn default() -> Self {
        Self::corrected()
    }
}

/// Gates on multi-key LWE ciphertexts of a fixed roster.
///
/// Each gate is a linear combination of the inputs followed by one call to
/// the refresh oracle.
pub struct LweBackend<W: TorusWord> {
    oracle: Arc<RefreshOracle<W>>,
    roster: Roster,
    constants: GateConstants,
    counter: GateCounter,
}

impl<W: TorusWord> LweBackend<W> {
    pub fn new(oracle: Arc<RefreshOracle<W>>, roster: Roster) -> Self {
        Self::with_constants(oracle, roster, GateConstants::corrected())
    }

    pub fn with_constants(oracle: Arc<RefreshOracle<W>>, roster: Roster, constants: GateConstants) -> Self {
        LweBackend {
            oracle,
            roster,
            constants,
            counter: GateCounter::new(),
        }
    }

    pub fn params(&self) -> &LweParams {
        self.oracle.params()
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn oracle(&self) -> &Arc<RefreshOracle<W>> {
        &self.oracle
    }

    pub fn constants(&self) -> GateConstants {
        self.constants
    }

    fn eighths(&self, num: i64) -> MkLweCiphertext<W> {
        self.counter.record_mod_to_t();
        let mu = Torus::from_rational(num, 8).expect("eighths are exact");
        MkLweCiphertext::trivial(mu, &self.roster, self.params().n)
    }

    fn add(&self, a: &MkLweCiphertext<W>, b: &MkLweCiphertext<W>) -> Result<MkLweCiphertext<W>> {
        self.counter.record_add();
        lwe_add(a, b)
    }

    fn sub(&self, a: &MkLweCiphertext<W>, b: &MkLweCiphertext<W>) -> Result<MkLweCiphertext<W>> {
        self.counter.record_sub();
        lwe_sub(a, b)
    }

    fn mul(&self, a: &MkLweCiphertext<W>, b: &MkLweCiphertext<W>, k: i64) -> Result<MkLweCiphertext<W>> {
        self.counter.record_mul();
        lwe_mul_const(a, b, k)
    }

    /// The linear combination of a gate, before refresh.
    pub fn combine(
        &self,
        kind: GateKind,
        c1: &MkLweCiphertext<W>,
        c2: &MkLweCiphertext<W>,
    ) -> Result<MkLweCiphertext<W>> {
        let k = self.constants;
        match kind {
            GateKind::And => self.add(&self.add(&self.eighths(k.and), c1)?, c2),
            GateKind::Or => self.add(&self.add(&self.eighths(k.or), c1)?, c2),
            GateKind::Nand => self.sub(&self.sub(&self.eighths(k.nand), c1)?, c2),
            GateKind::Nor => self.sub(&self.sub(&self.eighths(k.nor), c1)?, c2),
            GateKind::Xor => {
                let d = self.sub(c1, c2)?;
                let zero = MkLweCiphertext::trivial(Torus::zero(), &self.roster, self.params().n);
                self.mul(&zero, &d, 2)
            }
            GateKind::Xnor => {
                let d = self.sub(c1, c2)?;
                self.mul(&self.eighths(k.xnor), &d, -2)
            }
        }
    }
}

impl<W: TorusWord> GateBackend for LweBackend<W> {
    type Bit = MkLweCiphertext<W>;

    fn gate(&self, kind: GateKind, a: &Self::Bit, b: &Self::Bit) -> Result<Self::Bit> {
        let combined = self.combine(kind, a, b)?;
        self.counter.record_gate(kind);
        self.counter.record_refresh();
        self.oracle.refresh(&combined)
    }

    fn not(&self, a: &Self::Bit) -> Result<Self::Bit> {
        self.counter.record_not();
        let quarter = self.eighths(2);
        self.sub(&quarter, a)
    }

    fn constant(&self, m: bool) -> Self::Bit {
        MkLweCiphertext::trivial(mod_to_t(m), &self.roster, self.params().n)
    }

    fn counter(&self) -> &GateCounter {
        &self.counter
    }
}

impl<W: TorusWord> std::fmt::Debug for LweBackend<W> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LweBackend")
            .field("parties", &self.roster.len())
            .field("n", &self.params().n)
            .field("constants", &self.constants)
            .finish()
    }
}
