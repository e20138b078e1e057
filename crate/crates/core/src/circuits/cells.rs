use crate::error::Result;
use crate::gates::GateBackend;

/// Carry construction of the one-bit adder.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FullAdderStyle {
    /// `cout = (a & b) | ((a ^ b) & c)`, reusing the sum's first XOR: 5 gates.
    #[default]
    Shared,
    /// `cout = ((a & b) | (a & c)) | (b & c)`: 7 gates.
    Naive,
}

/// Five-gate full adder. Returns `(sum, carry)`.
pub fn full_adder<B: GateBackend>(
    be: &B,
    a: &B::Bit,
    b: &B::Bit,
    c: &B::Bit,
) -> Result<(B::Bit, B::Bit)> {
    full_adder_with(be, FullAdderStyle::Shared, a, b, c)
}

pub fn full_adder_with<B: GateBackend>(
    be: &B,
    style: FullAdderStyle,
    a: &B::Bit,
    b: &B::Bit,
    c: &B::Bit,
) -> Result<(B::Bit, B::Bit)> {
    let t = be.xor(a, b)?;
    let sum = be.xor(c, &t)?;
    let carry = match style {
        FullAdderStyle::Shared => {
            let g = be.and(a, b)?;
            let h = be.and(&t, c)?;
            be.or(&g, &h)?
        }
        FullAdderStyle::Naive => {
            let ab = be.and(a, b)?;
            let ac = be.and(a, c)?;
            let bc = be.and(b, c)?;
            be.or(&be.or(&ab, &ac)?, &bc)?
        }
    };
    Ok((sum, carry))
}

/// Cell variants of the signed array multiplier, named by how many of
/// their inputs carry negative weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdderCellKind {
    /// Plain full adder.
    Adder0,
    /// `a` is negative: full adder on `(!a, b, c)`, sum negated.
    Adder1,
    /// `a` and `b` are negative: full adder on `(!a, !b, c)`, carry negated.
    Adder2,
}

pub fn homadder<B: GateBackend>(
    be: &B,
    kind: AdderCellKind,
    a: &B::Bit,
    b: &B::Bit,
    c: &B::Bit,
) -> Result<(B::Bit, B::Bit)> {
    match kind {
        AdderCellKind::Adder0 => full_adder(be, a, b, c),
        AdderCellKind::Adder1 => {
            let (s, cout) = full_adder(be, &be.not(a)?, b, c)?;
            Ok((be.not(&s)?, cout))
        }
        AdderCellKind::Adder2 => {
            let (s, cout) = full_adder(be, &be.not(a)?, &be.not(b)?, c)?;
            Ok((s, be.not(&cout)?))
        }
    }
}

/// Controlled adder/subtractor: `a + (b ^ p) + c`. With `p = 1` and the
/// row's first carry set to `p` this subtracts `b`. Seven gates.
pub fn cas_cell<B: GateBackend>(
    be: &B,
    a: &B::Bit,
    b: &B::Bit,
    c: &B::Bit,
    p: &B::Bit,
) -> Result<(B::Bit, B::Bit)> {
    let t = be.xor(b, p)?;
    let out = be.xor(a, &be.xor(&t, c)?)?;
    let a_or_c = be.or(a, c)?;
    let a_and_c = be.and(a, c)?;
    let cout = be.or(&be.and(&a_or_c, &t)?, &a_and_c)?;
    Ok((out, cout))
}
