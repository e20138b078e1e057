//! Discretized real torus `T = R/Z`.
//!
//! A torus element is stored as an unsigned machine word `raw` that stands
//! for `raw / 2^BITS mod 1`. All group operations wrap modulo `2^BITS`, so
//! every constant with a power-of-two denominator up to `2^BITS` is exact.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{PrimInt, Unsigned, WrappingAdd, WrappingMul, WrappingNeg, WrappingSub};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Machine word backing a torus element (`u32` or `u64`).
pub trait TorusWord:
    PrimInt
    + Unsigned
    + WrappingAdd
    + WrappingSub
    + WrappingMul
    + WrappingNeg
    + Default
    + fmt::Debug
    + fmt::LowerHex
    + std::hash::Hash
    + Send
    + Sync
    + 'static
{
    const BITS: u32;

    /// Reduces a signed integer modulo `2^BITS`.
    fn from_i128_wrapping(v: i128) -> Self;

    fn to_u64(self) -> u64;

    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl TorusWord for u32 {
    const BITS: u32 = 32;

    fn from_i128_wrapping(v: i128) -> Self {
        v as u32
    }

    fn to_u64(self) -> u64 {
        self as u64
    }

    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random()
    }
}

impl TorusWord for u64 {
    const BITS: u32 = 64;

    fn from_i128_wrapping(v: i128) -> Self {
        v as u64
    }

    fn to_u64(self) -> u64 {
        self
    }

    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random()
    }
}

/// An element of the torus with `W::BITS` bits of precision.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Torus<W: TorusWord> {
    pub raw: W,
}

impl<W: TorusWord> Torus<W> {
    pub const fn from_raw(raw: W) -> Self {
        Torus { raw }
    }

    pub fn zero() -> Self {
        Torus { raw: W::zero() }
    }

    /// Exact `num / den mod 1`; `den` must be a power of two no larger than
    /// `2^BITS`.
    pub fn from_rational(num: i64, den: u128) -> Result<Self> {
        if den == 0 || !den.is_power_of_two() || den > (1u128 << W::BITS) {
            return Err(Error::InexactTorusConstant { den });
        }
        let step = (1u128 << W::BITS) / den;
        let raw = (num as i128).wrapping_mul(step as i128);
        Ok(Torus {
            raw: W::from_i128_wrapping(raw),
        })
    }

    /// Rounds a real number to the nearest torus point.
    pub fn from_f64(x: f64) -> Self {
        let scaled = (x * 2f64.powi(W::BITS as i32)).round();
        // Reduce in floating point first so the cast stays in range.
        let modulus = 2f64.powi(W::BITS as i32);
        let reduced = scaled.rem_euclid(modulus);
        let raw = if reduced >= modulus { 0i128 } else { reduced as i128 };
        Torus {
            raw: W::from_i128_wrapping(raw),
        }
    }

    /// Representative in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        self.raw.to_u64() as f64 / 2f64.powi(W::BITS as i32)
    }

    /// Representative in `[-1/2, 1/2)`.
    pub fn to_signed_f64(self) -> f64 {
        let x = self.to_f64();
        if x >= 0.5 {
            x - 1.0
        } else {
            x
        }
    }

    /// Multiplication by a signed integer, wrapping modulo 1.
    pub fn scale(self, k: i64) -> Self {
        Torus {
            raw: self.raw.wrapping_mul(&W::from_i128_wrapping(k as i128)),
        }
    }
}

/// Maps a message bit onto the torus with scaling factor 1/4.
pub fn mod_to_t<W: TorusWord>(m: bool) -> Torus<W> {
    if m {
        Torus {
            raw: W::one() << (W::BITS as usize - 2),
        }
    } else {
        Torus::zero()
    }
}

impl<W: TorusWord> Add for Torus<W> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Torus {
            raw: self.raw.wrapping_add(&rhs.raw),
        }
    }
}

impl<W: TorusWord> Sub for Torus<W> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Torus {
            raw: self.raw.wrapping_sub(&rhs.raw),
        }
    }
}

impl<W: TorusWord> Neg for Torus<W> {
    type Output = Self;
    fn neg(self) -> Self {
        Torus {
            raw: self.raw.wrapping_neg(),
        }
    }
}

impl<W: TorusWord> AddAssign for Torus<W> {
    fn add_assign(&mut self, rhs: Self) {
        self.raw = self.raw.wrapping_add(&rhs.raw);
    }
}

impl<W: TorusWord> SubAssign for Torus<W> {
    fn sub_assign(&mut self, rhs: Self) {
        self.raw = self.raw.wrapping_sub(&rhs.raw);
    }
}

impl<W: TorusWord> fmt::Debug for Torus<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Torus(0x{:x} ~ {:.6})", self.raw, self.to_f64())
    }
}

/// Seeded source of rounded Gaussian torus noise and uniform torus samples.
///
/// Each worker owns its sampler; it is not meant to be shared across threads.
pub struct NoiseSampler {
    stddev: f64,
    seed: u64,
    normal: Option<Normal<f64>>,
    rng: ChaCha20Rng,
}

impl NoiseSampler {
    pub fn new(stddev: f64, seed: u64) -> Result<Self> {
        if !stddev.is_finite() || stddev < 0.0 {
            return Err(Error::InvalidParams(format!(
                "noise stddev must be finite and non-negative, got {stddev}"
            )));
        }
        let normal = if stddev > 0.0 {
            Some(Normal::new(0.0, stddev).expect("validated stddev"))
        } else {
            None
        };
        Ok(NoiseSampler {
            stddev,
            seed,
            normal,
            rng: ChaCha20Rng::seed_from_u64(seed),
        })
    }

    pub fn stddev(&self) -> f64 {
        self.stddev
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sample_gaussian<W: TorusWord>(&mut self) -> Torus<W> {
        match &self.normal {
            Some(normal) => Torus::from_f64(normal.sample(&mut self.rng)),
            None => Torus::zero(),
        }
    }

    pub fn sample_uniform<W: TorusWord>(&mut self) -> Torus<W> {
        Torus::from_raw(W::sample_uniform(&mut self.rng))
    }

    pub fn rng(&mut self) -> &mut ChaCha20Rng {
        &mut self.rng
    }
}
