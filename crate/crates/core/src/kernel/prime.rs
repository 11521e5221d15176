//! Primality testing.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const SMALL_PRIMES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

// Miller-Rabin with the first 13 primes as bases is exact below this value.
const MR13_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn strong_probable_prime_u64(n: u64, base: u64, d: u64, s: u32) -> bool {
    let mut x = pow_mod(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        let p = u64::from(p);
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    SMALL_PRIMES[..12]
        .iter()
        .all(|&b| strong_probable_prime_u64(n, u64::from(b), d, s))
}

fn strong_probable_prime_big(n: &BigUint, base: &BigUint, d: &BigUint, s: u64) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = base.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a/n) for odd positive n.
fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).magnitude().clone();
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn is_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &(&r * &r) == n
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    let x = if x.is_odd() { x + n } else { x };
    let h: BigInt = x >> 1;
    h.mod_floor(n)
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigUint) -> bool {
    if is_square(n) {
        return false;
    }
    let mut d_abs = 5i64;
    let d = loop {
        let d = if (d_abs / 2) % 2 == 0 { d_abs } else { -d_abs };
        let j = jacobi(&BigInt::from(d), n);
        if j == -1 {
            break BigInt::from(d);
        }
        if j == 0 && BigUint::from(d_abs.unsigned_abs()) != *n {
            return false;
        }
        d_abs += 2;
    };
    let n_int = BigInt::from(n.clone());
    let q: BigInt = (BigInt::one() - &d) / 4;
    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let odd = &n_plus_1 >> s;

    // P = 1
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = q.mod_floor(&n_int);
    let bits = odd.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&n_int);
        v = (&v * &v - BigInt::from(2) * &qk).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if odd.bit(i) {
            let u_next = half_mod(&u + &v, &n_int);
            let v_next = half_mod(&d * &u + &v, &n_int);
            u = u_next;
            v = v_next;
            qk = (&qk * &q).mod_floor(&n_int);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - BigInt::from(2) * &qk).mod_floor(&n_int);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&n_int);
    }
    false
}

pub(crate) fn is_prime_biguint(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for p in SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mr = SMALL_PRIMES
        .iter()
        .all(|&b| strong_probable_prime_big(n, &BigUint::from(b), &d, s));
    if !mr {
        return false;
    }
    if n.to_u128().is_some_and(|v| v < MR13_LIMIT) {
        return true;
    }
    strong_lucas(n)
}

/// Primality test.
///
/// Exact below 3.3e24 (Miller-Rabin over the first 13 prime bases). Above
/// that, a strong Lucas test is added (Baillie-PSW), which has no known
/// counterexample.
pub fn is_prime(n: &BigInt) -> bool {
    n.sign() == Sign::Plus && is_prime_biguint(n.magnitude())
}
