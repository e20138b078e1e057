use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lwe::PartyId;

/// Metadata written next to an upload bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub party_id: PartyId,
    pub w: usize,
    pub count: usize,
    pub params_hash: String,
}

/// A participant's encrypted samples: serialized single-key integer
/// ciphertexts, one `x` and one `y` per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UploadBundle {
    pub manifest: Manifest,
    pub xs: Vec<Vec<u8>>,
    pub ys: Vec<Vec<u8>>,
}

impl UploadBundle {
    pub fn ciphertext_count(&self) -> usize {
        self.xs.len() + self.ys.len()
    }

    /// Total bytes of ciphertext payload.
    pub fn payload_len(&self) -> usize {
        self.xs.iter().chain(&self.ys).map(Vec::len).sum()
    }

    fn check(&self) -> Result<()> {
        if self.xs.len() != self.manifest.count || self.ys.len() != self.manifest.count {
            return Err(Error::Decode(format!(
                "manifest announces {} rows, bundle holds {} x and {} y",
                self.manifest.count,
                self.xs.len(),
                self.ys.len()
            )));
        }
        Ok(())
    }

    /// Writes `manifest.json` plus `x_NNN.mkin` / `y_NNN.mkin`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("manifest.json"), serde_json::to_vec_pretty(&self.manifest)?)?;
        for (i, (x, y)) in self.xs.iter().zip(&self.ys).enumerate() {
            fs::write(dir.join(format!("x_{i:03}.mkin")), x)?;
            fs::write(dir.join(format!("y_{i:03}.mkin")), y)?;
        }
        Ok(())
    }

    pub fn read_dir(dir: &Path) -> Result<Self> {
        let manifest: Manifest = serde_json::from_slice(&fs::read(dir.join("manifest.json"))?)?;
        let mut xs = Vec::with_capacity(manifest.count);
        let mut ys = Vec::with_capacity(manifest.count);
        for i in 0..manifest.count {
            xs.push(fs::read(dir.join(format!("x_{i:03}.mkin")))?);
            ys.push(fs::read(dir.join(format!("y_{i:03}.mkin")))?);
        }
        let b = UploadBundle { manifest, xs, ys };
        b.check()?;
        Ok(b)
    }

    /// Single message form: manifest length and JSON, then every ciphertext
    /// with a u32 length prefix.
    pub fn to_bytes(&self) -> Vec<u8> {
        let manifest = serde_json::to_vec(&self.manifest).expect("manifest serializes");
        let mut out = Vec::with_capacity(4 + manifest.len() + self.payload_len() + 8 * self.manifest.count);
        out.extend_from_slice(&(manifest.len() as u32).to_le_bytes());
        out.extend_from_slice(&manifest);
        for c in self.xs.iter().chain(&self.ys) {
            out.extend_from_slice(&(c.len() as u32).to_le_bytes());
            out.extend_from_slice(c);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut rest = bytes;
        let mut take = |n: usize| -> Result<&[u8]> {
            if rest.len() < n {
                return Err(Error::Decode("truncated bundle".into()));
            }
            let (head, tail) = rest.split_at(n);
            rest = tail;
            Ok(head)
        };
        let len = |b: &[u8]| u32::from_le_bytes(b.try_into().unwrap()) as usize;
        let mlen = len(take(4)?);
        let manifest: Manifest = serde_json::from_slice(take(mlen)?)?;
        let mut blobs = Vec::with_capacity(2 * manifest.count);
        for _ in 0..2 * manifest.count {
            let n = len(take(4)?);
            blobs.push(take(n)?.to_vec());
        }
        if !rest.is_empty() {
            return Err(Error::Decode("trailing bytes after bundle".into()));
        }
        let ys = blobs.split_off(manifest.count);
        Ok(UploadBundle {
            manifest,
            xs: blobs,
            ys,
        })
    }
}
