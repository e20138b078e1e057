use rayon::prelude::*;

use super::cells::{cas_cell, full_adder, homadder, AdderCellKind};
use super::{check_width, same_width, IntCiphertext};
use crate::error::{Error, Result};
use crate::gates::GateBackend;

/// Quotient and remainder.
pub type QuotRem<T> = (IntCiphertext<T>, IntCiphertext<T>);

/// Ripple-carry addition with an explicit carry-in; the final carry is
/// dropped. `5w` gates.
pub fn add_with_carry<B: GateBackend>(
    be: &B,
    a: &IntCiphertext<B::Bit>,
    b: &IntCiphertext<B::Bit>,
    carry_in: B::Bit,
) -> Result<IntCiphertext<B::Bit>> {
    let w = same_width(a, b)?;
    let mut carry = carry_in;
    let mut out = Vec::with_capacity(w);
    for i in 0..w {
        let (s, c) = full_adder(be, a.bit(i), b.bit(i), &carry)?;
        out.push(s);
        carry = c;
    }
    IntCiphertext::from_bits(out)
}

/// `a + b mod 2^w`.
pub fn add_w<B: GateBackend>(
    be: &B,
    a: &IntCiphertext<B::Bit>,
    b: &IntCiphertext<B::Bit>,
) -> Result<IntCiphertext<B::Bit>> {
    add_with_carry(be, a, b, be.constant(false))
}

/// `a - b mod 2^w` as `a + !b + 1`, the complement taken with XOR gates
/// against a constant 1. `6w` gates.
pub fn sub_w<B: GateBackend>(
    be: &B,
    a: &IntCiphertext<B::Bit>,
    b: &IntCiphertext<B::Bit>,
) -> Result<IntCiphertext<B::Bit>> {
    same_width(a, b)?;
    let one = be.constant(true);
    let flipped = b
        .bits()
        .par_iter()
        .map(|x| be.xor(x, &one))
        .collect::<Result<Vec<_>>>()?;
    add_with_carry(be, a, &IntCiphertext::from_bits(flipped)?, one)
}

/// `(x ^ s) + s`: negates `x` when `s` is 1. `3w - 1` gates.
pub fn conditional_negate<B: GateBackend>(
    be: &B,
    x: &IntCiphertext<B::Bit>,
    s: &B::Bit,
) -> Result<IntCiphertext<B::Bit>> {
    let flipped = x
        .bits()
        .par_iter()
        .map(|b| be.xor(b, s))
        .collect::<Result<Vec<_>>>()?;
    let w = flipped.len();
    let mut carry = s.clone();
    let mut out = Vec::with_capacity(w);
    for (i, y) in flipped.iter().enumerate() {
        out.push(be.xor(y, &carry)?);
        if i + 1 < w {
            carry = be.and(y, &carry)?;
        }
    }
    IntCiphertext::from_bits(out)
}

/// Converts between two's complement and sign-magnitude: the sign bit is
/// kept and the remaining bits are negated when it is set. Involutive.
pub fn compensate<B: GateBackend>(
    be: &B,
    x: &IntCiphertext<B::Bit>,
) -> Result<IntCiphertext<B::Bit>> {
    let w = x.width();
    if w == 1 {
        return Ok(x.clone());
    }
    let sign = x.sign().clone();
    let mut bits = conditional_negate(be, &x.truncate(w - 1), &sign)?.into_bits();
    bits.push(sign);
    IntCiphertext::from_bits(bits)
}

/// Signed array multiplier, low `w` bits of `a * b`.
///
/// Partial product `a_j b_i` has weight `2^(i+j)`, negated when exactly one
/// of `i`, `j` is the sign position. Row `i` adds the partial products of
/// `b_i` into the running sum with `w` cells; each cell is chosen by how
/// many of its inputs are negative so that every digit stays a single bit
/// with a known sign.
pub fn mul_w<B: GateBackend>(
    be: &B,
    a: &IntCiphertext<B::Bit>,
    b: &IntCiphertext<B::Bit>,
) -> Result<IntCiphertext<B::Bit>> {
    let w = same_width(a, b)?;
    if w < 2 {
        return Err(Error::UnsupportedWidth(w));
    }
    check_width(w)?;
    let top = w - 1;
    let negative = |i: usize, j: usize| (i == top) != (j == top);

    let pp: Vec<B::Bit> = (0..w * w)
        .into_par_iter()
        .map(|k| be.and(a.bit(k % w), b.bit(k / w)))
        .collect::<Result<_>>()?;
    let pp_at = |i: usize, j: usize| &pp[i * w + j];

    // Signed digits by position. The first row's top cell has an empty
    // column and adds a constant 0 instead.
    let mut acc: Vec<Option<(B::Bit, bool)>> = vec![None; 2 * w];
    for (j, slot) in acc.iter_mut().take(w).enumerate() {
        *slot = Some((pp_at(0, j).clone(), negative(0, j)));
    }
    for i in 1..w {
        let mut carry = (be.constant(false), false);
        for j in 0..w {
            let pos = i + j;
            let x = acc[pos].take().unwrap_or_else(|| (be.constant(false), false));
            let y = (pp_at(i, j).clone(), negative(i, j));
            let (sum, next) = signed_cell(be, x, y, carry)?;
            acc[pos] = Some(sum);
            carry = next;
        }
        acc[i + w] = Some(carry);
    }
    let bits = acc
        .into_iter()
        .take(w)
        .map(|d| d.expect("digit present").0)
        .collect();
    IntCiphertext::from_bits(bits)
}

type Digit<T> = (T, bool);
type DigitPair<T> = (Digit<T>, Digit<T>);

fn signed_cell<B: GateBackend>(
    be: &B,
    x: Digit<B::Bit>,
    y: Digit<B::Bit>,
    c: Digit<B::Bit>,
) -> Result<DigitPair<B::Bit>> {
    let mut neg = Vec::with_capacity(3);
    let mut pos = Vec::with_capacity(3);
    for (bit, is_neg) in [x, y, c] {
        if is_neg {
            neg.push(bit);
        } else {
            pos.push(bit);
        }
    }
    match neg.len() {
        0 => {
            let (s, k) = homadder(be, AdderCellKind::Adder0, &pos[0], &pos[1], &pos[2])?;
            Ok(((s, false), (k, false)))
        }
        1 => {
            let (s, k) = homadder(be, AdderCellKind::Adder1, &neg[0], &pos[0], &pos[1])?;
            Ok(((s, true), (k, false)))
        }
        2 => {
            let (s, k) = homadder(be, AdderCellKind::Adder2, &neg[0], &neg[1], &pos[0])?;
            Ok(((s, false), (k, true)))
        }
        _ => {
            let (s, k) = homadder(be, AdderCellKind::Adder0, &neg[0], &neg[1], &neg[2])?;
            Ok(((s, true), (k, true)))
        }
    }
}

/// Signed division of a `2w`-bit dividend by a `w`-bit divisor.
///
/// Returns `(q, r)` with `a = q*b + r`, `q` truncated toward zero and `r`
/// carrying the sign of `a`. The divisor must be nonzero and the quotient
/// must fit in `w` bits; under encryption neither can be checked, and
/// violating inputs produce unspecified bits.
///
/// Magnitudes are taken with conditional negation, divided by a
/// non-restoring array of `w` rows of `w` CAS cells, and the signs are
/// reapplied at the end.
pub fn div_w<B: GateBackend>(
    be: &B,
    a: &IntCiphertext<B::Bit>,
    b: &IntCiphertext<B::Bit>,
) -> Result<QuotRem<B::Bit>> {
    let w = b.width();
    check_width(2 * w)?;
    if a.width() != 2 * w {
        return Err(Error::WidthMismatch {
            left: a.width(),
            right: 2 * w,
        });
    }
    let sa = a.sign().clone();
    let sb = b.sign().clone();
    let sq = be.xor(&sa, &sb)?;

    let (mag_a, mag_b) = rayon::join(
        || conditional_negate(be, a, &sa),
        || conditional_negate(be, b, &sb),
    );
    let mag_a = mag_a?;
    let mag_b = mag_b?;

    let mut p: Vec<B::Bit> = mag_a.bits()[w..].to_vec();
    let mut control = be.constant(true);
    let mut q = vec![be.constant(false); w];
    for row in 0..w {
        let next = mag_a.bit(w - 1 - row).clone();
        let mut shifted = Vec::with_capacity(w);
        shifted.push(next);
        shifted.extend_from_slice(&p[..w - 1]);
        let mut carry = control.clone();
        let mut out = Vec::with_capacity(w);
        for (x, y) in shifted.iter().zip(mag_b.bits()) {
            let (s, c) = cas_cell(be, x, y, &carry, &control)?;
            out.push(s);
            carry = c;
        }
        let qbit = be.not(&out[w - 1])?;
        q[w - 1 - row] = qbit.clone();
        control = qbit;
        p = out;
    }
    be.counter().record_layers(w as u64);

    // A negative final remainder gets the divisor added back.
    let neg_p = p[w - 1].clone();
    let fix = mag_b
        .bits()
        .par_iter()
        .map(|x| be.and(x, &neg_p))
        .collect::<Result<Vec<_>>>()?;
    let r_mag = add_w(
        be,
        &IntCiphertext::from_bits(p)?,
        &IntCiphertext::from_bits(fix)?,
    )?;

    let (q, r) = rayon::join(
        || conditional_negate(be, &IntCiphertext::from_bits(q)?, &sq),
        || conditional_negate(be, &r_mag, &sa),
    );
    Ok((q?, r?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{decode_int, encode_int, PlainBits};
    use crate::gates::ClearBackend;

    fn enc(v: i64, w: usize) -> IntCiphertext<bool> {
        encode_int(v, w, &mut PlainBits).unwrap()
    }

    fn dec(x: &IntCiphertext<bool>) -> i64 {
        decode_int(x, &PlainBits).unwrap()
    }

    #[test]
    fn small_examples() {
        let be = ClearBackend::new();
        assert_eq!(dec(&add_w(&be, &enc(3, 4), &enc(-5, 4)).unwrap()), -2);
        assert_eq!(dec(&sub_w(&be, &enc(2, 4), &enc(7, 4)).unwrap()), -5);
        assert_eq!(dec(&mul_w(&be, &enc(-3, 8), &enc(5, 8)).unwrap()), -15);
        let (q, r) = div_w(&be, &enc(7, 8), &enc(-2, 4)).unwrap();
        assert_eq!((dec(&q), dec(&r)), (-3, 1));
    }

    #[test]
    fn compensate_examples() {
        let be = ClearBackend::new();
        let c = compensate(&be, &enc(-5, 4)).unwrap();
        assert_eq!(c.bits(), &[true, false, true, true]);
        assert_eq!(dec(&compensate(&be, &enc(6, 4)).unwrap()), 6);
        for v in -8..8 {
            let twice = compensate(&be, &compensate(&be, &enc(v, 4)).unwrap()).unwrap();
            assert_eq!(dec(&twice), v);
        }
    }

    #[test]
    fn width_errors() {
        let be = ClearBackend::new();
        assert!(matches!(
            add_w(&be, &enc(1, 4), &enc(1, 5)),
            Err(Error::WidthMismatch { .. })
        ));
        assert!(matches!(
            mul_w(&be, &enc(0, 1), &enc(0, 1)),
            Err(Error::UnsupportedWidth(1))
        ));
        assert!(div_w(&be, &enc(1, 4), &enc(1, 4)).is_err());
    }
}
