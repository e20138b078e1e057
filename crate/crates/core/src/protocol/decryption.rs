use crate::circuits::{decode_int, IntCiphertext, JointDecryptor};
use crate::error::Result;
use crate::linreg::{Model, ModelCiphertext};
use crate::lwe::{Keyring, LweSecretKey, MkLweCiphertext, Roster};

/// Collects key contributions and opens the model once every party of the
/// roster has contributed.
pub struct DecryptionSession {
    roster: Roster,
    model: ModelCiphertext<MkLweCiphertext<u32>>,
    keys: Keyring,
}

impl DecryptionSession {
    pub fn new(model: ModelCiphertext<MkLweCiphertext<u32>>, roster: Roster) -> Self {
        DecryptionSession {
            roster,
            model,
            keys: Keyring::new(),
        }
    }

    pub fn contribute(&mut self, key: LweSecretKey) {
        self.keys.insert(key);
    }

    /// Fails with `MissingKey` before decrypting anything if a party has
    /// not contributed.
    pub fn decrypt(&self) -> Result<Model> {
        let dec = JointDecryptor::new(&self.keys, &self.roster)?;
        Ok(Model {
            slope: decode_int(&self.model.slope, &dec)?,
            intercept: decode_int(&self.model.intercept, &dec)?,
            zoom: self.model.zoom,
        })
    }

    /// Opens an auxiliary value, such as the evaluation loss, under the
    /// same all-or-nothing rule.
    pub fn decrypt_int(&self, ct: &IntCiphertext<MkLweCiphertext<u32>>) -> Result<i64> {
        let dec = JointDecryptor::new(&self.keys, &self.roster)?;
        decode_int(ct, &dec)
    }
}
