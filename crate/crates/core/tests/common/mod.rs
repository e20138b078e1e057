//! Independent integer oracles shared by the integration tests.
#![allow(dead_code)]

pub mod linreg_oracle;
pub mod world;

/// Reduces `v` modulo `2^w` into the signed range.
pub fn wrap(v: i128, w: u32) -> i64 {
    let m = 1i128 << w;
    let r = v.rem_euclid(m);
    (if r >= m / 2 { r - m } else { r }) as i64
}

pub fn range(w: u32) -> std::ops::RangeInclusive<i64> {
    -(1i64 << (w - 1))..=(1i64 << (w - 1)) - 1
}

pub fn add(a: i64, b: i64, w: u32) -> i64 {
    wrap(a as i128 + b as i128, w)
}

pub fn sub(a: i64, b: i64, w: u32) -> i64 {
    wrap(a as i128 - b as i128, w)
}

pub fn mul(a: i64, b: i64, w: u32) -> i64 {
    wrap(a as i128 * b as i128, w)
}

/// Quotient truncated toward zero and remainder with the dividend's sign,
/// or `None` when the divisor is zero or the quotient overflows `w` bits.
pub fn div(a: i64, b: i64, w: u32) -> Option<(i64, i64)> {
    if b == 0 {
        return None;
    }
    let q = a / b;
    let r = a % b;
    if !range(w).contains(&q) {
        return None;
    }
    Some((q, r))
}
