//! Two's-complement integer circuits built from bootstrapped gates.

mod arith;
mod cells;
mod encoding;

pub use arith::{
    add_w, add_with_carry, compensate, conditional_negate, div_w, mul_w, sub_w, QuotRem,
};
pub use cells::{cas_cell, full_adder, full_adder_with, homadder, AdderCellKind, FullAdderStyle};
pub use encoding::{
    decode_int, encode_int, int_from_bytes, int_to_bytes, BitDecryptor, BitEncryptor,
    JointDecryptor, PartyEncryptor, PlainBits, INT_MAGIC,
};

use crate::error::{Error, Result};

/// Little-endian vector of encrypted bits; the last bit is the sign.
#[derive(Clone, Debug, PartialEq)]
pub struct IntCiphertext<B> {
    bits: Vec<B>,
}

impl<B: Clone> IntCiphertext<B> {
    pub fn from_bits(bits: Vec<B>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::UnsupportedWidth(0));
        }
        Ok(IntCiphertext { bits })
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[B] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<B> {
        self.bits
    }

    pub fn bit(&self, i: usize) -> &B {
        &self.bits[i]
    }

    pub fn sign(&self) -> &B {
        &self.bits[self.bits.len() - 1]
    }

    /// Widens to `w` bits by replicating the sign bit. Free.
    pub fn sign_extend(&self, w: usize) -> Self {
        let mut bits = self.bits.clone();
        let s = self.sign().clone();
        bits.resize(w.max(bits.len()), s);
        IntCiphertext { bits }
    }

    /// Keeps the `w` low bits. Free.
    pub fn truncate(&self, w: usize) -> Self {
        IntCiphertext {
            bits: self.bits[..w.min(self.bits.len())].to_vec(),
        }
    }
}

/// Signed range of a `w`-bit two's-complement integer.
pub fn signed_range(w: usize) -> (i64, i64) {
    assert!((1..=63).contains(&w), "width {w} out of range");
    let half = 1i64 << (w - 1);
    (-half, half - 1)
}

pub(crate) fn check_width(w: usize) -> Result<()> {
    if (1..=63).contains(&w) {
        Ok(())
    } else {
        Err(Error::UnsupportedWidth(w))
    }
}

pub(crate) fn same_width<B: Clone>(a: &IntCiphertext<B>, b: &IntCiphertext<B>) -> Result<usize> {
    if a.width() != b.width() {
        return Err(Error::WidthMismatch {
            left: a.width(),
            right: b.width(),
        });
    }
    Ok(a.width())
}
