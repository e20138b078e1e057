use super::{check_width, IntCiphertext};
use crate::error::{Error, Result};
use crate::lwe::{
    ciphertext_from_bytes, ciphertext_to_bytes, serialized_len, Keyring, LweParams, LweSecretKey,
    MkLweCiphertext, Roster,
};
use crate::torus::NoiseSampler;

pub const INT_MAGIC: &[u8; 4] = b"MKIN";

pub trait BitEncryptor {
    type Bit;
    fn encrypt_bit(&mut self, m: bool) -> Result<Self::Bit>;
}

pub trait BitDecryptor {
    type Bit;
    fn decrypt_bit(&self, c: &Self::Bit) -> Result<bool>;
}

/// Identity "encryption" for the clear backend.
#[derive(Clone, Copy, Debug, Default)]
pub struct PlainBits;

impl BitEncryptor for PlainBits {
    type Bit = bool;
    fn encrypt_bit(&mut self, m: bool) -> Result<bool> {
        Ok(m)
    }
}

impl BitDecryptor for PlainBits {
    type Bit = bool;
    fn decrypt_bit(&self, c: &bool) -> Result<bool> {
        Ok(*c)
    }
}

/// Encrypts under one party's key and extends to a joint roster.
pub struct PartyEncryptor<'a> {
    key: &'a LweSecretKey,
    params: &'a LweParams,
    sampler: NoiseSampler,
    roster: Roster,
}

impl<'a> PartyEncryptor<'a> {
    pub fn new(key: &'a LweSecretKey, params: &'a LweParams, roster: Roster, seed: u64) -> Result<Self> {
        if roster.position(key.party()).is_none() {
            return Err(Error::PartyNotInRoster { party: key.party() });
        }
        Ok(PartyEncryptor {
            key,
            params,
            sampler: NoiseSampler::new(params.alpha, seed)?,
            roster,
        })
    }
}

impl BitEncryptor for PartyEncryptor<'_> {
    type Bit = MkLweCiphertext<u32>;
    fn encrypt_bit(&mut self, m: bool) -> Result<Self::Bit> {
        MkLweCiphertext::sym_enc(self.key, m, self.params, &mut self.sampler).extend(&self.roster)
    }
}

/// Decrypts with every party's key. Fails before touching any ciphertext
/// if a key is missing.
pub struct JointDecryptor<'a> {
    keys: &'a Keyring,
}

impl<'a> JointDecryptor<'a> {
    pub fn new(keys: &'a Keyring, roster: &Roster) -> Result<Self> {
        for &p in roster.parties() {
            keys.get(p)?;
        }
        Ok(JointDecryptor { keys })
    }
}

impl BitDecryptor for JointDecryptor<'_> {
    type Bit = MkLweCiphertext<u32>;
    fn decrypt_bit(&self, c: &Self::Bit) -> Result<bool> {
        c.sym_dec(self.keys)
    }
}

/// Two's-complement encoding, least significant bit first.
pub fn encode_int<E: BitEncryptor>(v: i64, w: usize, enc: &mut E) -> Result<IntCiphertext<E::Bit>>
where
    E::Bit: Clone,
{
    check_width(w)?;
    let (lo, hi) = super::signed_range(w);
    if v < lo || v > hi {
        return Err(Error::OutOfRange { value: v, width: w });
    }
    let bits = (0..w)
        .map(|i| enc.encrypt_bit((v >> i) & 1 == 1))
        .collect::<Result<Vec<_>>>()?;
    IntCiphertext::from_bits(bits)
}

pub fn decode_int<D: BitDecryptor>(ct: &IntCiphertext<D::Bit>, dec: &D) -> Result<i64>
where
    D::Bit: Clone,
{
    let w = ct.width();
    check_width(w)?;
    let mut v: i64 = 0;
    for (i, b) in ct.bits().iter().enumerate() {
        if dec.decrypt_bit(b)? {
            v |= 1 << i;
        }
    }
    if v >> (w - 1) & 1 == 1 {
        v -= 1 << w;
    }
    Ok(v)
}

/// `"MKIN"`, width as u16, then each bit ciphertext in order.
pub fn int_to_bytes(ct: &IntCiphertext<MkLweCiphertext<u32>>) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(INT_MAGIC);
    out.extend_from_slice(&(ct.width() as u16).to_le_bytes());
    for b in ct.bits() {
        out.extend_from_slice(&ciphertext_to_bytes(b));
    }
    out
}

pub fn int_from_bytes(bytes: &[u8], roster: &Roster) -> Result<IntCiphertext<MkLweCiphertext<u32>>> {
    if bytes.len() < 6 || &bytes[..4] != INT_MAGIC {
        return Err(Error::Decode("bad integer ciphertext header".into()));
    }
    let w = u16::from_le_bytes([bytes[4], bytes[5]]) as usize;
    check_width(w)?;
    let mut rest = &bytes[6..];
    let mut bits = Vec::with_capacity(w);
    for _ in 0..w {
        if rest.len() < 12 {
            return Err(Error::Decode("truncated integer ciphertext".into()));
        }
        let p = u16::from_le_bytes([rest[6], rest[7]]) as usize;
        let n = u32::from_le_bytes(rest[8..12].try_into().unwrap()) as usize;
        let len = serialized_len(p, n);
        if rest.len() < len {
            return Err(Error::Decode("truncated integer ciphertext".into()));
        }
        bits.push(ciphertext_from_bytes(&rest[..len], roster)?);
        rest = &rest[len..];
    }
    if !rest.is_empty() {
        return Err(Error::Decode("trailing bytes after integer ciphertext".into()));
    }
    IntCiphertext::from_bits(bits)
}
