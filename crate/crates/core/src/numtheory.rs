//! Arithmetic in the unit group of `Z / 2^n`.
//!
//! Exponents are capped at 62 so that products of two residues fit in a
//! `u128` without overflow.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_EXPONENT: u32 = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("{0} is even, not a unit modulo a power of two")]
    Even(u64),
    #[error("exponent {0} outside the supported range")]
    BadExponent(u32),
    #[error("k = {k} must satisfy 0 < k < 2^{l}")]
    KOutOfRange { k: u64, l: u32 },
}

/// `u = (-1)^sign * 5^power (mod 2^exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitDecomposition {
    pub exponent: u32,
    pub sign: u8,
    pub power: u64,
}

impl UnitDecomposition {
    pub fn reconstruct(&self) -> u64 {
        let m = modulus(self.exponent);
        let five = pow_mod(5, self.power as u128, self.exponent);
        if self.sign == 1 {
            ((m - five as u128) % m) as u64
        } else {
            five
        }
    }
}

fn modulus(n: u32) -> u128 {
    1u128 << n
}

fn mul_mod(a: u64, b: u64, n: u32) -> u64 {
    ((a as u128 * b as u128) & (modulus(n) - 1)) as u64
}

pub fn pow_mod(base: u64, mut e: u128, n: u32) -> u64 {
    let mask = (modulus(n) - 1) as u64;
    let mut b = base & mask;
    let mut acc = 1u64 & mask;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, n);
        }
        b = mul_mod(b, b, n);
        e >>= 1;
    }
    acc
}

fn check_exponent(n: u32, min: u32) -> Result<(), NumError> {
    if n < min || n > MAX_EXPONENT {
        Err(NumError::BadExponent(n))
    } else {
        Ok(())
    }
}

/// Multiplicative order of the odd number `a` modulo `2^n`, found by
/// repeated squaring (the order is always a power of two).
pub fn order_mod(a: u64, n: u32) -> Result<u64, NumError> {
    if a.is_multiple_of(2) {
        return Err(NumError::Even(a));
    }
    check_exponent(n, 1)?;
    let mut x = a & ((modulus(n) - 1) as u64);
    let mut order = 1u64;
    while x != 1 {
        x = mul_mod(x, x, n);
        order <<= 1;
    }
    Ok(order)
}

/// Whether some power `k^i`, `0 <= i < ord(k)`, is `-1 (mod 2^(l+1))`.
/// Defined for odd `0 < k < 2^l` and `l >= 2`.
///
/// `<k>` is cyclic of 2-power order, so `-1` lies in it exactly when it
/// is the unique involution `k^(ord/2)`.
pub fn exists_power_neg_one(k: u64, l: u32) -> Result<bool, NumError> {
    if k.is_multiple_of(2) {
        return Err(NumError::Even(k));
    }
    if l < 2 || l + 1 > MAX_EXPONENT {
        return Err(NumError::BadExponent(l));
    }
    if k == 0 || k >= 1u64 << l {
        return Err(NumError::KOutOfRange { k, l });
    }
    Ok(power_hits_neg_one(k, l + 1))
}

/// `-1 ∈ <k> (mod 2^n)` for odd `k`, without range restrictions on `k`.
pub fn power_hits_neg_one(k: u64, n: u32) -> bool {
    let ord = order_mod(k, n).expect("odd k");
    let minus_one = (modulus(n) - 1) as u64;
    if ord == 1 {
        return n == 1;
    }
    pow_mod(k, (ord / 2) as u128, n) == minus_one
}

/// `k ≡ -1 (mod 2^exponent)`.
pub fn is_neg_one_mod(k: i64, exponent: u32) -> bool {
    let m = 1i128 << exponent;
    (k as i128 + 1).rem_euclid(m) == 0
}

/// The unique `(a, b)` with `u ≡ (-1)^a 5^b (mod 2^n)`, `b < 2^(n-2)`.
pub fn decompose_unit(u: u64, n: u32) -> Result<UnitDecomposition, NumError> {
    if u.is_multiple_of(2) {
        return Err(NumError::Even(u));
    }
    check_exponent(n, 3)?;
    let mask = (modulus(n) - 1) as u64;
    let u = u & mask;
    // units ≡ 1 (mod 4) form <5>
    let (sign, t) = if u % 4 == 1 {
        (0u8, u)
    } else {
        (1u8, (mask - u + 1) & mask)
    };
    let group_order: u128 = 1 << (n - 2);
    let five_inv = pow_mod(5, group_order - 1, n);
    // binary discrete log in the cyclic 2-group <5>
    let mut power = 0u64;
    for bit in 0..(n - 2) {
        let c = mul_mod(t, pow_mod(five_inv, power as u128, n), n);
        let probe = pow_mod(c, 1u128 << (n - 3 - bit), n);
        if probe != 1 {
            power |= 1 << bit;
        }
    }
    Ok(UnitDecomposition {
        exponent: n,
        sign,
        power,
    })
}
