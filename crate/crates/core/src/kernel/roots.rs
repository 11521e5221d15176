//! Exact integer kth roots.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

#[inline]
fn pow_le_u128(base: u128, k: u32, x: u128) -> bool {
    match base.checked_pow(k) {
        Some(v) => v <= x,
        None => false,
    }
}

/// Floor of the kth root of `x`, for `k >= 1`.
///
/// The f64 estimate only seeds an integer Newton iteration; the result is
/// corrected until `r^k <= x < (r+1)^k` holds exactly.
pub fn root_floor_u128(x: u128, k: u32) -> u128 {
    assert!(k >= 1, "root index must be at least 1");
    if k == 1 || x < 2 {
        return x;
    }
    if k >= 128 {
        return 1;
    }
    let seed = (x as f64).powf(1.0 / f64::from(k));
    // Overestimate so that Newton descends monotonically.
    let mut r = (seed * (1.0 + 1e-9)) as u128 + 2;
    while pow_le_u128(r, k, x) {
        r = r.saturating_mul(2);
    }
    loop {
        let q = match r.checked_pow(k - 1) {
            Some(p) => x / p,
            None => 0,
        };
        let next = ((u128::from(k) - 1) * r + q) / u128::from(k);
        if next >= r {
            break;
        }
        r = next;
    }
    while !pow_le_u128(r, k, x) {
        r -= 1;
    }
    while pow_le_u128(r + 1, k, x) {
        r += 1;
    }
    r
}

/// Floor of the kth root of a nonnegative `u64`.
pub fn root_floor_u64(x: u64, k: u32) -> u64 {
    root_floor_u128(u128::from(x), k) as u64
}

fn root_floor_biguint(x: &BigUint, k: u32) -> BigUint {
    if let Some(small) = x.to_u128() {
        return BigUint::from(root_floor_u128(small, k));
    }
    if k == 1 {
        return x.clone();
    }
    let bits = x.bits();
    // 2^ceil(bits/k) > x^(1/k)
    let mut r = BigUint::one() << bits.div_ceil(u64::from(k));
    let k_big = BigUint::from(k);
    let km1 = BigUint::from(k - 1);
    loop {
        let next = (&km1 * &r + x / r.pow(k - 1)) / &k_big;
        if next >= r {
            break;
        }
        r = next;
    }
    while &r.pow(k) > x {
        r -= 1u32;
    }
    loop {
        let up = &r + 1u32;
        if &up.pow(k) <= x {
            r = up;
        } else {
            break;
        }
    }
    r
}

/// `r` with `r^k <= x < (r+1)^k`.
pub fn ikth_root_floor(x: &BigInt, k: u32) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::domain("k", "at least 1", 0));
    }
    if x.sign() == Sign::Minus {
        return Err(Error::domain("x", "nonnegative", x.clone()));
    }
    Ok(BigInt::from(root_floor_biguint(x.magnitude(), k)))
}

/// Smallest `r >= 0` with `r^k >= x`, for `x >= 0`.
pub fn ikth_root_ceil(x: &BigInt, k: u32) -> Result<BigInt> {
    let r = ikth_root_floor(x, k)?;
    if &num_traits::pow(r.clone(), k as usize) == x {
        Ok(r)
    } else {
        Ok(r + 1)
    }
}

/// Signed floor root: the largest integer `r` with `r^k <= x` for odd `k`.
///
/// For even `k` the caller must pass `x >= 0`.
pub(crate) fn signed_root_floor(x: &BigInt, k: u32) -> BigInt {
    if x.sign() != Sign::Minus {
        return BigInt::from(root_floor_biguint(x.magnitude(), k));
    }
    debug_assert!(k.is_odd());
    // r^k <= x < 0  <=>  (-r)^k >= -x  <=>  -r >= ceil_root(-x)
    let m = root_floor_biguint(x.magnitude(), k);
    let ceil = if &m.pow(k) == x.magnitude() {
        m
    } else {
        m + 1u32
    };
    -BigInt::from(ceil)
}

/// Signed ceiling root: the smallest integer `r` with `r^k >= x` for odd `k`,
/// or for even `k` with `x >= 0`.
pub(crate) fn signed_root_ceil(x: &BigInt, k: u32) -> BigInt {
    if x.sign() == Sign::Minus {
        debug_assert!(k.is_odd());
        // r^k >= x  <=>  (-r)^k <= -x  <=>  -r <= floor_root(-x)
        return -BigInt::from(root_floor_biguint(x.magnitude(), k));
    }
    let m = root_floor_biguint(x.magnitude(), k);
    if &m.pow(k) == x.magnitude() {
        BigInt::from(m)
    } else {
        BigInt::from(m + 1u32)
    }
}

/// Returns the kth root of `x` when `x` is a perfect kth power.
///
/// Nonnegative `x` yields the nonnegative root. Negative `x` has a root only
/// for odd `k`, and the root is negative.
///
/// # Panics
///
/// Panics if `k == 0`.
pub fn is_kth_power(x: &BigInt, k: u32) -> Option<BigInt> {
    assert!(k >= 1, "root index must be at least 1");
    if k == 1 {
        return Some(x.clone());
    }
    let negative = x.sign() == Sign::Minus;
    if negative && k.is_even() {
        return None;
    }
    let mag = x.magnitude();
    let root = if let Some(small) = mag.to_u128() {
        let r = root_floor_u128(small, k);
        if r.checked_pow(k) != Some(small) {
            return None;
        }
        BigInt::from(r)
    } else {
        let r = root_floor_biguint(mag, k);
        if &r.pow(k) != mag {
            return None;
        }
        BigInt::from(r)
    };
    if negative {
        Some(-root)
    } else {
        Some(root)
    }
}
