use super::{Keyring, LweParams, LweSecretKey, PartyId, Roster};
use crate::error::{Error, Result};
use crate::torus::{mod_to_t, NoiseSampler, Torus, TorusWord};

/// Multi-key LWE sample `(b, a_1, ..., a_p)` with its tracked noise variance.
///
/// `a` is stored row-major: row `i` is the mask for the `i`-th party of the
/// roster.
#[derive(Clone, Debug, PartialEq)]
pub struct MkLweCiphertext<W: TorusWord> {
    roster: Roster,
    n: usize,
    b: Torus<W>,
    a: Vec<Torus<W>>,
    variance: f64,
}

impl<W: TorusWord> MkLweCiphertext<W> {
    pub(crate) fn from_parts(
        roster: Roster,
        n: usize,
        b: Torus<W>,
        a: Vec<Torus<W>>,
        variance: f64,
    ) -> Result<Self> {
        if a.len() != roster.len() * n {
            return Err(Error::DimensionMismatch {
                expected: roster.len() * n,
                got: a.len(),
            });
        }
        Ok(MkLweCiphertext {
            roster,
            n,
            b,
            a,
            variance,
        })
    }

    /// Noiseless ciphertext with all-zero masks.
    pub fn trivial(mu: Torus<W>, roster: &Roster, n: usize) -> Self {
        MkLweCiphertext {
            roster: roster.clone(),
            n,
            b: mu,
            a: vec![Torus::zero(); roster.len() * n],
            variance: 0.0,
        }
    }

    /// Single-party encryption of an arbitrary torus value.
    pub fn encrypt_torus(
        key: &LweSecretKey,
        mu: Torus<W>,
        params: &LweParams,
        sampler: &mut NoiseSampler,
    ) -> Self {
        let n = key.dimension();
        debug_assert_eq!(n, params.n);
        let a: Vec<Torus<W>> = (0..n).map(|_| sampler.sample_uniform()).collect();
        let dot = inner_product(&a, key.bits());
        let e = sampler.sample_gaussian::<W>();
        MkLweCiphertext {
            roster: Roster::single(key.party()),
            n,
            b: mu - dot + e,
            a,
            variance: params.fresh_variance(),
        }
    }

    /// Encrypts a bit with scaling factor 1/4.
    pub fn sym_enc(
        key: &LweSecretKey,
        m: bool,
        params: &LweParams,
        sampler: &mut NoiseSampler,
    ) -> Self {
        Self::encrypt_torus(key, mod_to_t(m), params, sampler)
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn parties(&self) -> usize {
        self.roster.len()
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> Torus<W> {
        self.b
    }

    pub fn mask(&self, row: usize) -> &[Torus<W>] {
        &self.a[row * self.n..(row + 1) * self.n]
    }

    pub fn masks(&self) -> &[Torus<W>] {
        &self.a
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// `b + sum_i <a_i, s_i>`.
    pub fn phase(&self, keys: &Keyring) -> Result<Torus<W>> {
        let mut acc = self.b;
        for (row, &party) in self.roster.parties().iter().enumerate() {
            let key = keys.get(party)?;
            if key.dimension() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: key.dimension(),
                });
            }
            acc += inner_product(self.mask(row), key.bits());
        }
        Ok(acc)
    }

    /// The bit whose encoding `m/4` is nearest to the phase.
    pub fn sym_dec(&self, keys: &Keyring) -> Result<bool> {
        Ok(decode_phase(self.phase(keys)?))
    }

    /// Embeds the ciphertext into a larger roster by zero-padding the mask
    /// rows of the new parties. Phase and variance are unchanged.
    pub fn extend(&self, target: &Roster) -> Result<Self> {
        if &self.roster == target {
            return Ok(self.clone());
        }
        let mut a = vec![Torus::zero(); target.len() * self.n];
        for (row, &party) in self.roster.parties().iter().enumerate() {
            let dst = target
                .position(party)
                .ok_or(Error::PartyNotInRoster { party })?;
            a[dst * self.n..(dst + 1) * self.n].copy_from_slice(self.mask(row));
        }
        Ok(MkLweCiphertext {
            roster: target.clone(),
            n: self.n,
            b: self.b,
            a,
            variance: self.variance,
        })
    }

    /// Party owning a single-party ciphertext.
    pub fn owner(&self) -> Option<PartyId> {
        match self.roster.parties() {
            [p] => Some(*p),
            _ => None,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.roster != other.roster {
            return Err(Error::RosterMismatch);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }
}

/// Decision rule of decryption: `m = 1` iff the phase lies in `[1/8, 5/8]`.
/// Both ties resolve to 1.
pub(crate) fn decode_phase<W: TorusWord>(phase: Torus<W>) -> bool {
    let eighth = W::one() << (W::BITS as usize - 3);
    let lo = eighth;
    let hi = eighth.wrapping_mul(&W::from_i128_wrapping(5));
    phase.raw >= lo && phase.raw <= hi
}

fn inner_product<W: TorusWord>(a: &[Torus<W>], s: &[u8]) -> Torus<W> {
    let mut acc = W::zero();
    for (x, &bit) in a.iter().zip(s) {
        if bit == 1 {
            acc = acc.wrapping_add(&x.raw);
        }
    }
    Torus::from_raw(acc)
}

/// `c1 + c2`, variance `v1 + v2`.
pub fn lwe_add<W: TorusWord>(
    c1: &MkLweCiphertext<W>,
    c2: &MkLweCiphertext<W>,
) -> Result<MkLweCiphertext<W>> {
    c1.check_compatible(c2)?;
    let a = c1.a.iter().zip(&c2.a).map(|(x, y)| *x + *y).collect();
    Ok(MkLweCiphertext {
        roster: c1.roster.clone(),
        n: c1.n,
        b: c1.b + c2.b,
        a,
        variance: c1.variance + c2.variance,
    })
}

/// `c1 - c2`, variance `v1 + v2`.
pub fn lwe_sub<W: TorusWord>(
    c1: &MkLweCiphertext<W>,
    c2: &MkLweCiphertext<W>,
) -> Result<MkLweCiphertext<W>> {
    c1.check_compatible(c2)?;
    let a = c1.a.iter().zip(&c2.a).map(|(x, y)| *x - *y).collect();
    Ok(MkLweCiphertext {
        roster: c1.roster.clone(),
        n: c1.n,
        b: c1.b - c2.b,
        a,
        variance: c1.variance + c2.variance,
    })
}

/// `c1 + k * c2`, variance `v1 + k^2 v2`.
pub fn lwe_mul_const<W: TorusWord>(
    c1: &MkLweCiphertext<W>,
    c2: &MkLweCiphertext<W>,
    k: i64,
) -> Result<MkLweCiphertext<W>> {
    c1.check_compatible(c2)?;
    let a = c1
        .a
        .iter()
        .zip(&c2.a)
        .map(|(x, y)| *x + y.scale(k))
        .collect();
    let k2 = (k as f64) * (k as f64);
    Ok(MkLweCiphertext {
        roster: c1.roster.clone(),
        n: c1.n,
        b: c1.b + c2.b.scale(k),
        a,
        variance: c1.variance + k2 * c2.variance,
    })
}
