//! Residue arithmetic modulo `m^c`.
//!
//! Moduli are bounded by the configured safety cap, so residues live in `u64`
//! and products are formed in `u128`. Exponents may be arbitrary precision.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Canonical residue of `v` in `[0, modulus)`.
pub fn residue(v: &BigInt, modulus: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(modulus));
    r.to_u64().expect("residue is below the modulus")
}

pub fn residue_i64(v: i64, modulus: u64) -> u64 {
    (v as i128).rem_euclid(modulus as i128) as u64
}

#[inline]
pub fn add(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 + b as u128) % modulus as u128) as u64
}

#[inline]
pub fn sub(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 + modulus as u128 - (b % modulus) as u128) % modulus as u128) as u64
}

#[inline]
pub fn mul(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

#[inline]
pub fn neg(a: u64, modulus: u64) -> u64 {
    sub(0, a, modulus)
}

pub fn pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut result = 1 % modulus;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul(result, b, modulus);
        }
        b = mul(b, b, modulus);
        exp >>= 1;
    }
    result
}

fn pow_big(base: u64, exp: &BigUint, modulus: u64) -> u64 {
    match exp.to_u64() {
        Some(e) => pow(base, e, modulus),
        None => BigUint::from(base)
            .modpow(exp, &BigUint::from(modulus))
            .to_u64()
            .expect("residue is below the modulus"),
    }
}

/// `unit^exp` where negative exponents use `unit_inv`, the inverse of `unit`.
pub fn pow_signed(unit: u64, unit_inv: u64, exp: &BigInt, modulus: u64) -> u64 {
    match exp.sign() {
        Sign::NoSign => 1 % modulus,
        Sign::Plus => pow_big(unit, exp.magnitude(), modulus),
        Sign::Minus => pow_big(unit_inv, exp.magnitude(), modulus),
    }
}

/// Multiplicative inverse, if `a` is a unit.
pub fn inverse(a: u64, modulus: u64) -> Option<u64> {
    if modulus == 1 {
        return Some(0);
    }
    let ext = (a as i128).extended_gcd(&(modulus as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(modulus as i128) as u64)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// `base^exp` as an exact integer, or `None` when it exceeds `limit`.
pub fn checked_pow_limit(base: u64, exp: u32, limit: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > limit {
            return None;
        }
    }
    Some(acc)
}

/// True when `v` is zero modulo `modulus`.
pub fn divides(modulus: u64, v: &BigInt) -> bool {
    (v % BigInt::from(modulus)).is_zero()
}
