//! Multi-key LWE samples over the torus.
//!
//! A multi-key ciphertext `(b, a_1, ..., a_p)` carries one mask row per
//! party of its roster; its phase is `b + sum_i <a_i, s_i>`. Every
//! ciphertext tracks the variance of its noise so that the refresh step can
//! tell when a circuit forgot to bootstrap.

mod ciphertext;
mod codec;
mod key;
mod params;
mod refresh;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use ciphertext::{lwe_add, lwe_mul_const, lwe_sub, MkLweCiphertext};
pub use codec::{ciphertext_from_bytes, ciphertext_to_bytes, header_parties, serialized_len, CIPHERTEXT_MAGIC};
pub use key::{key_from_bytes, key_to_bytes, keygen, Keyring, LweSecretKey, KEY_MAGIC};
pub use params::LweParams;
pub use refresh::{refresh_band, RefreshOracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartyId(pub u16);

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered list of the parties a ciphertext is encrypted under.
#[derive(Clone, Debug)]
pub struct Roster(Arc<[PartyId]>);

impl Roster {
    /// Builds a roster in canonical (ascending) order; rejects duplicates.
    pub fn new(parties: impl IntoIterator<Item = PartyId>) -> crate::Result<Self> {
        let mut v: Vec<PartyId> = parties.into_iter().collect();
        v.sort_unstable();
        for pair in v.windows(2) {
            if pair[0] == pair[1] {
                return Err(crate::Error::DuplicateParty(pair[0]));
            }
        }
        Ok(Roster(v.into()))
    }

    pub fn single(party: PartyId) -> Self {
        Roster(Arc::from(vec![party]))
    }

    /// Roster `0..p`.
    pub fn range(p: u16) -> Self {
        Roster((0..p).map(PartyId).collect::<Vec<_>>().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parties(&self) -> &[PartyId] {
        &self.0
    }

    pub fn position(&self, party: PartyId) -> Option<usize> {
        self.0.binary_search(&party).ok()
    }
}

impl PartialEq for Roster {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Roster {}
