use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::bundle::{Manifest, UploadBundle};
use crate::circuits::{encode_int, int_to_bytes, PartyEncryptor};
use crate::error::Result;
use crate::lwe::{keygen, LweParams, LweSecretKey, PartyId, Roster};

/// A data owner. Holds its secret key and encrypts its own rows.
pub struct ParticipantState {
    key: LweSecretKey,
    params: LweParams,
    seed: u64,
}

impl ParticipantState {
    /// Generates a fresh key from `seed`.
    pub fn new(party: PartyId, params: LweParams, seed: u64) -> Result<Self> {
        params.validate()?;
        let key = keygen(&params, party, &mut ChaCha20Rng::seed_from_u64(seed));
        Ok(ParticipantState { key, params, seed })
    }

    pub fn from_key(key: LweSecretKey, params: LweParams, seed: u64) -> Result<Self> {
        params.validate()?;
        Ok(ParticipantState { key, params, seed })
    }

    pub fn party(&self) -> PartyId {
        self.key.party()
    }

    /// Encrypts each `(x, y)` under this party's key alone.
    pub fn prepare(&self, rows: &[(i64, i64)], w: usize) -> Result<UploadBundle> {
        let roster = Roster::single(self.party());
        let mut enc = PartyEncryptor::new(&self.key, &self.params, roster, self.seed.wrapping_add(1))?;
        let mut xs = Vec::with_capacity(rows.len());
        let mut ys = Vec::with_capacity(rows.len());
        for &(x, y) in rows {
            xs.push(int_to_bytes(&encode_int(x, w, &mut enc)?));
            ys.push(int_to_bytes(&encode_int(y, w, &mut enc)?));
        }
        Ok(UploadBundle {
            manifest: Manifest {
                party_id: self.party(),
                w,
                count: rows.len(),
                params_hash: self.params.digest(),
            },
            xs,
            ys,
        })
    }

    /// Hands the secret key across the trust boundary: to the refresh
    /// oracle dealer, or to the decryption session when this party agrees
    /// to open the result.
    pub fn release_key(&self) -> LweSecretKey {
        self.key.clone()
    }
}
