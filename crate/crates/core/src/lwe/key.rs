use std::collections::BTreeMap;

use rand::Rng;

use super::{LweParams, PartyId};
use crate::error::{Error, Result};

/// Binary LWE secret key of one party.
#[derive(Clone, PartialEq, Eq)]
pub struct LweSecretKey {
    party: PartyId,
    bits: Vec<u8>,
}

impl std::fmt::Debug for LweSecretKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LweSecretKey")
            .field("party", &self.party)
            .field("n", &self.bits.len())
            .finish_non_exhaustive()
    }
}

impl LweSecretKey {
    pub fn from_bits(party: PartyId, bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Decode("secret key entries must be 0 or 1".into()));
        }
        Ok(LweSecretKey { party, bits })
    }

    pub fn party(&self) -> PartyId {
        self.party
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn dimension(&self) -> usize {
        self.bits.len()
    }

    /// Number of positions where the two keys differ.
    pub fn hamming_distance(&self, other: &LweSecretKey) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Samples a uniform binary key of length `params.n`.
pub fn keygen<R: Rng + ?Sized>(params: &LweParams, party: PartyId, rng: &mut R) -> LweSecretKey {
    let bits = (0..params.n).map(|_| rng.random_range(0..=1u8)).collect();
    LweSecretKey { party, bits }
}

pub const KEY_MAGIC: &[u8; 4] = b"MKSK";
const KEY_VERSION: u16 = 1;

/// `"MKSK"`, version u16, party u16, n u32, then one byte per key bit.
pub fn key_to_bytes(key: &LweSecretKey) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + key.bits.len());
    out.extend_from_slice(KEY_MAGIC);
    out.extend_from_slice(&KEY_VERSION.to_le_bytes());
    out.extend_from_slice(&key.party.0.to_le_bytes());
    out.extend_from_slice(&(key.bits.len() as u32).to_le_bytes());
    out.extend_from_slice(&key.bits);
    out
}

pub fn key_from_bytes(bytes: &[u8]) -> Result<LweSecretKey> {
    if bytes.len() < 12 || &bytes[..4] != KEY_MAGIC {
        return Err(Error::Decode("bad key header".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != KEY_VERSION {
        return Err(Error::Decode(format!("unsupported key version {version}")));
    }
    let party = PartyId(u16::from_le_bytes([bytes[6], bytes[7]]));
    let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    if bytes.len() != 12 + n {
        return Err(Error::Decode("key length does not match header".into()));
    }
    LweSecretKey::from_bits(party, bytes[12..].to_vec())
}

/// Secret keys indexed by party.
#[derive(Clone, Debug, Default)]
pub struct Keyring {
    keys: BTreeMap<PartyId, LweSecretKey>,
}

impl Keyring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: LweSecretKey) -> Option<LweSecretKey> {
        self.keys.insert(key.party, key)
    }

    pub fn get(&self, party: PartyId) -> Result<&LweSecretKey> {
        self.keys.get(&party).ok_or(Error::MissingKey(party))
    }

    pub fn contains(&self, party: PartyId) -> bool {
        self.keys.contains_key(&party)
    }

    pub fn parties(&self) -> impl Iterator<Item = PartyId> + '_ {
        self.keys.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

impl FromIterator<LweSecretKey> for Keyring {
    fn from_iter<I: IntoIterator<Item = LweSecretKey>>(iter: I) -> Self {
        let mut ring = Keyring::new();
        for k in iter {
            ring.insert(k);
        }
        ring
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn key_length_and_entries() {
        let params = LweParams::standard();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let k = keygen(&params, PartyId(0), &mut rng);
        assert_eq!(k.dimension(), 560);
        assert!(k.bits().iter().all(|&b| b <= 1));
    }

    #[test]
    fn seeded_keygen_is_reproducible() {
        let params = LweParams::with_dimension(4, 0.0).unwrap();
        let a = keygen(&params, PartyId(3), &mut ChaCha20Rng::seed_from_u64(11));
        let b = keygen(&params, PartyId(3), &mut ChaCha20Rng::seed_from_u64(11));
        assert_eq!(a, b);
    }

    #[test]
    fn independent_keys_differ_in_about_half_the_positions() {
        let params = LweParams::standard();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let trials = 200;
        let mut total = 0usize;
        for _ in 0..trials {
            let a = keygen(&params, PartyId(0), &mut rng);
            let b = keygen(&params, PartyId(1), &mut rng);
            total += a.hamming_distance(&b);
        }
        let mean = total as f64 / trials as f64;
        // n/2 = 280 with per-trial stddev sqrt(n)/2 ~ 11.8; the mean of 200 trials is far tighter.
        assert!((mean - 280.0).abs() < 5.0, "mean hamming distance {mean}");
    }

    #[test]
    fn key_bytes_round_trip() {
        let params = LweParams::with_dimension(16, 0.0).unwrap();
        let k = keygen(&params, PartyId(7), &mut ChaCha20Rng::seed_from_u64(3));
        let bytes = key_to_bytes(&k);
        assert_eq!(bytes.len(), 28);
        assert_eq!(key_from_bytes(&bytes).unwrap(), k);
        assert!(key_from_bytes(&bytes[..20]).is_err());
        let mut bad = bytes.clone();
        bad[12] = 2;
        assert!(key_from_bytes(&bad).is_err());
    }

    #[test]
    fn keyring_lookup() {
        let params = LweParams::with_dimension(8, 0.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let ring: Keyring = (0..3).map(|i| keygen(&params, PartyId(i), &mut rng)).collect();
        assert_eq!(ring.len(), 3);
        assert!(ring.get(PartyId(2)).is_ok());
        assert!(matches!(ring.get(PartyId(9)), Err(Error::MissingKey(PartyId(9)))));
    }
}
