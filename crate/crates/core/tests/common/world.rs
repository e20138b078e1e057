//! A p-party LWE setup for tests that need real ciphertexts.

use std::sync::Arc;

use mkgc::circuits::{decode_int, encode_int, IntCiphertext, JointDecryptor, PartyEncryptor, PlainBits};
use mkgc::gates::{ClearBackend, LweBackend};
use mkgc::linreg::EncryptedDataset;
use mkgc::lwe::{keygen, Keyring, LweParams, MkLweCiphertext, PartyId, RefreshOracle, Roster};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type Ct = MkLweCiphertext<u32>;

pub struct World {
    pub params: LweParams,
    pub keys: Keyring,
    pub roster: Roster,
    pub backend: LweBackend<u32>,
    seed: u64,
    counter: u64,
}

impl World {
    pub fn new(p: u16, seed: u64) -> World {
        Self::with_params(p, LweParams::standard(), seed)
    }

    pub fn with_params(p: u16, params: LweParams, seed: u64) -> World {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let keys: Keyring = (0..p).map(|i| keygen(&params, PartyId(i), &mut rng)).collect();
        let roster = Roster::range(p);
        let oracle = Arc::new(RefreshOracle::new(keys.clone(), params.clone(), seed ^ 0x5eed).unwrap());
        let backend = LweBackend::new(oracle, roster.clone());
        World {
            params,
            keys,
            roster,
            backend,
            seed,
            counter: 0,
        }
    }

    pub fn parties(&self) -> u16 {
        self.roster.len() as u16
    }

    pub fn enc(&mut self, party: u16, v: i64, w: usize) -> IntCiphertext<Ct> {
        self.counter += 1;
        let key = self.keys.get(PartyId(party)).unwrap();
        let mut e = PartyEncryptor::new(key, &self.params, self.roster.clone(), self.seed.wrapping_add(self.counter << 20)).unwrap();
        encode_int(v, w, &mut e).unwrap()
    }

    pub fn dec(&self, c: &IntCiphertext<Ct>) -> i64 {
        decode_int(c, &JointDecryptor::new(&self.keys, &self.roster).unwrap()).unwrap()
    }

    /// Sample i is owned by party `i mod p`.
    pub fn dataset(&mut self, points: &[(i64, i64)], w: usize) -> EncryptedDataset<Ct> {
        let p = self.parties();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut owners = Vec::new();
        for (i, &(x, y)) in points.iter().enumerate() {
            let party = i as u16 % p;
            xs.push(self.enc(party, x, w));
            ys.push(self.enc(party, y, w));
            owners.push(PartyId(party));
        }
        EncryptedDataset::new(xs, ys, owners).unwrap()
    }
}

pub fn clear_dataset(points: &[(i64, i64)], w: usize) -> EncryptedDataset<bool> {
    let enc = |v| encode_int(v, w, &mut PlainBits).unwrap();
    EncryptedDataset::new(
        points.iter().map(|p| enc(p.0)).collect(),
        points.iter().map(|p| enc(p.1)).collect(),
        vec![PartyId(0); points.len()],
    )
    .unwrap()
}

pub fn clear_dec(c: &IntCiphertext<bool>) -> i64 {
    decode_int(c, &PlainBits).unwrap()
}

pub fn clear() -> ClearBackend {
    ClearBackend::new()
}
