use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{Keyring, LweParams, MkLweCiphertext, Roster};
use crate::error::{Error, Result};
use crate::torus::{mod_to_t, NoiseSampler, Torus, TorusWord};

/// Band decision of the refresh: bit 1 iff the phase lies in `[1/4, 3/4)`.
pub fn refresh_band<W: TorusWord>(phase: Torus<W>) -> bool {
    let quarter = W::one() << (W::BITS as usize - 2);
    let three_quarters = quarter.wrapping_mul(&W::from_i128_wrapping(3));
    phase.raw >= quarter && phase.raw < three_quarters
}

/// Trusted stand-in for gate bootstrapping followed by key switching.
///
/// It holds every party's secret key, evaluates the exact phase, applies the
/// band decision and returns a fresh multi-key encryption of the result.
/// This is not a cryptographic construction: whoever holds the oracle can
/// decrypt everything. It exists so that circuits can run at desk scale
/// with the same functional behaviour as bootstrapped gates.
#[derive(Debug)]
pub struct RefreshOracle<W: TorusWord> {
    keys: Keyring,
    params: LweParams,
    seed: u64,
    _word: std::marker::PhantomData<W>,
}

impl<W: TorusWord> RefreshOracle<W> {
    pub fn new(keys: Keyring, params: LweParams, seed: u64) -> Result<Self> {
        params.validate()?;
        for p in keys.parties() {
            let k = keys.get(p)?;
            if k.dimension() != params.n {
                return Err(Error::DimensionMismatch {
                    expected: params.n,
                    got: k.dimension(),
                });
            }
        }
        Ok(RefreshOracle {
            keys,
            params,
            seed,
            _word: std::marker::PhantomData,
        })
    }

    pub fn params(&self) -> &LweParams {
        &self.params
    }

    pub fn keys(&self) -> &Keyring {
        &self.keys
    }

    /// Largest variance the band decision tolerates: six standard deviations
    /// must stay below 1/8.
    pub fn variance_limit() -> f64 {
        let s = 1.0 / 48.0;
        s * s
    }

    /// Decrypts, bands and re-encrypts.
    ///
    /// The fresh noise is drawn from a generator keyed by the oracle seed and
    /// the input ciphertext, so the result does not depend on evaluation
    /// order or thread scheduling.
    pub fn refresh(&self, ct: &MkLweCiphertext<W>) -> Result<MkLweCiphertext<W>> {
        let variance = ct.variance();
        let spread = 6.0 * variance.sqrt();
        if spread.is_nan() || spread >= 0.125 {
            return Err(Error::NoiseBudgetExceeded { variance });
        }
        let phase = ct.phase(&self.keys)?;
        let m = refresh_band(phase);
        let seed = self.seed ^ fingerprint(ct);
        self.fresh(m, ct.roster(), seed)
    }

    /// Fresh multi-key encryption of `m`: one single-party encryption per
    /// roster member, of random shares that sum to `m/4`.
    pub fn fresh(&self, m: bool, roster: &Roster, seed: u64) -> Result<MkLweCiphertext<W>> {
        let mut sampler = NoiseSampler::new(self.params.alpha, seed)?;
        let parties = roster.parties();
        let mut shares: Vec<Torus<W>> = Vec::with_capacity(parties.len());
        let mut rest = mod_to_t::<W>(m);
        for _ in 1..parties.len() {
            let s: Torus<W> = sampler.sample_uniform();
            rest -= s;
            shares.push(s);
        }
        shares.push(rest);
        let mut acc = MkLweCiphertext::trivial(Torus::zero(), roster, self.params.n);
        for (&party, share) in parties.iter().zip(shares) {
            let key = self.keys.get(party)?;
            let single = MkLweCiphertext::encrypt_torus(key, share, &self.params, &mut sampler);
            acc = super::lwe_add(&acc, &single.extend(roster)?)?;
        }
        Ok(acc)
    }
}

/// FNV-1a over the ciphertext words.
fn fingerprint<W: TorusWord>(ct: &MkLweCiphertext<W>) -> u64 {
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |w: u64| {
        for byte in w.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(PRIME);
        }
    };
    eat(ct.b().raw.to_u64());
    for x in ct.masks() {
        eat(x.raw.to_u64());
    }
    for p in ct.roster().parties() {
        eat(p.0 as u64);
    }
    // Spread the hash before it is xored into the seed.
    let mut rng = ChaCha20Rng::seed_from_u64(h);
    rng.random()
}
