use super::{MkLweCiphertext, Roster};
use crate::error::{Error, Result};
use crate::torus::Torus;

pub const CIPHERTEXT_MAGIC: &[u8; 4] = b"MKLW";
const VERSION: u16 = 1;
const HEADER: usize = 4 + 2 + 2 + 4;

/// Encoded size of a ciphertext with `p` parties and dimension `n`.
pub fn serialized_len(p: usize, n: usize) -> usize {
    HEADER + 4 * (1 + p * n) + 8
}

/// Little-endian encoding: magic, version, p, n, b, the `p*n` mask
/// coefficients, then the variance as binary64.
pub fn ciphertext_to_bytes(ct: &MkLweCiphertext<u32>) -> Vec<u8> {
    let p = ct.parties();
    let n = ct.dimension();
    let mut out = Vec::with_capacity(serialized_len(p, n));
    out.extend_from_slice(CIPHERTEXT_MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(p as u16).to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&ct.b().raw.to_le_bytes());
    for x in ct.masks() {
        out.extend_from_slice(&x.raw.to_le_bytes());
    }
    out.extend_from_slice(&ct.variance().to_le_bytes());
    out
}

/// Decodes a ciphertext. The party ids are not part of the wire format, so
/// the caller supplies the roster; its length must match the header.
pub fn ciphertext_from_bytes(bytes: &[u8], roster: &Roster) -> Result<MkLweCiphertext<u32>> {
    if bytes.len() < HEADER {
        return Err(Error::Decode("ciphertext shorter than header".into()));
    }
    if &bytes[..4] != CIPHERTEXT_MAGIC {
        return Err(Error::Decode("bad ciphertext magic".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::Decode(format!("unsupported ciphertext version {version}")));
    }
    let p = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
    let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    if p != roster.len() {
        return Err(Error::DimensionMismatch {
            expected: roster.len(),
            got: p,
        });
    }
    if bytes.len() != serialized_len(p, n) {
        return Err(Error::Decode(format!(
            "ciphertext length {} does not match p={p}, n={n}",
            bytes.len()
        )));
    }
    let word = |i: usize| {
        let o = HEADER + 4 * i;
        Torus::from_raw(u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()))
    };
    let b = word(0);
    let a = (0..p * n).map(|i| word(1 + i)).collect();
    let tail = bytes.len() - 8;
    let variance = f64::from_le_bytes(bytes[tail..].try_into().unwrap());
    if variance.is_nan() || variance < 0.0 {
        return Err(Error::Decode("negative or NaN variance".into()));
    }
    MkLweCiphertext::from_parts(roster.clone(), n, b, a, variance)
}

/// Reads only the party count from an encoded header.
pub fn header_parties(bytes: &[u8]) -> Result<usize> {
    if bytes.len() < HEADER || &bytes[..4] != CIPHERTEXT_MAGIC {
        return Err(Error::Decode("bad ciphertext header".into()));
    }
    Ok(u16::from_le_bytes([bytes[6], bytes[7]]) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lwe::{keygen, Keyring, LweParams, PartyId};
    use crate::torus::NoiseSampler;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn round_trip() {
        let params = LweParams::with_dimension(16, 1e-4).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let keys: Keyring = (0..3).map(|i| keygen(&params, PartyId(i), &mut rng)).collect();
        let mut s = NoiseSampler::new(1e-4, 8).unwrap();
        let roster = Roster::range(3);
        let c = MkLweCiphertext::sym_enc(keys.get(PartyId(2)).unwrap(), true, &params, &mut s)
            .extend(&roster)
            .unwrap();
        let bytes = ciphertext_to_bytes(&c);
        assert_eq!(bytes.len(), serialized_len(3, 16));
        assert_eq!(&bytes[..4], b"MKLW");
        assert_eq!(header_parties(&bytes).unwrap(), 3);
        let d = ciphertext_from_bytes(&bytes, &roster).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn rejects_malformed_input() {
        let roster = Roster::single(PartyId(0));
        let c = MkLweCiphertext::<u32>::trivial(Torus::zero(), &roster, 4);
        let bytes = ciphertext_to_bytes(&c);
        assert!(ciphertext_from_bytes(&bytes[..10], &roster).is_err());
        assert!(ciphertext_from_bytes(&bytes[..bytes.len() - 1], &roster).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(ciphertext_from_bytes(&bad, &roster).is_err());
        assert!(ciphertext_from_bytes(&bytes, &Roster::range(2)).is_err());
    }

    #[test]
    fn size_is_linear_in_parties() {
        let sizes: Vec<usize> = [1, 2, 4, 8].iter().map(|&p| serialized_len(p, 560)).collect();
        assert_eq!(sizes[0], 12 + 4 * 561 + 8);
        let per_party = 4 * 560;
        for (p, s) in [1usize, 2, 4, 8].iter().zip(&sizes) {
            assert_eq!(*s, 16 + 8 + p * per_party);
        }
    }
}
