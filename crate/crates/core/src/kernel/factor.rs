//! Integer factorization and divisor machinery.

use super::prime::{is_prime_biguint, is_prime_u64, mul_mod};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Trial division runs up to this bound before switching to Pollard rho.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::bigint_serde")]
    pub prime: BigInt,
    pub exponent: u32,
}

/// Prime factorization of a positive integer, primes strictly increasing.
/// The integer 1 has no factors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeFactorization {
    factors: Vec<PrimePower>,
}

impl PrimeFactorization {
    fn from_sorted(mut primes: Vec<BigUint>) -> Self {
        primes.sort();
        let mut factors: Vec<PrimePower> = Vec::new();
        for p in primes {
            let p = BigInt::from(p);
            match factors.last_mut() {
                Some(last) if last.prime == p => last.exponent += 1,
                _ => factors.push(PrimePower {
                    prime: p,
                    exponent: 1,
                }),
            }
        }
        PrimeFactorization { factors }
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The product of all prime powers.
    pub fn value(&self) -> BigInt {
        self.factors
            .iter()
            .map(|f| num_traits::pow(f.prime.clone(), f.exponent as usize))
            .product()
    }

    /// d(n) = prod (e_i + 1).
    pub fn divisor_count(&self) -> BigInt {
        self.factors
            .iter()
            .map(|f| BigInt::from(f.exponent) + 1)
            .product()
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<BigInt> {
        let mut divs = vec![BigInt::one()];
        for f in &self.factors {
            let current = divs.len();
            let mut pk = BigInt::one();
            for _ in 0..f.exponent {
                pk *= &f.prime;
                for j in 0..current {
                    divs.push(&divs[j] * &pk);
                }
            }
        }
        divs.sort();
        divs
    }

    /// Checks the structural invariants: increasing primes, each prime, each exponent positive.
    pub fn is_valid(&self) -> bool {
        self.factors.windows(2).all(|w| w[0].prime < w[1].prime)
            && self
                .factors
                .iter()
                .all(|f| f.exponent >= 1 && super::prime::is_prime(&f.prime))
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn brent_u64(n: u64, c: u64) -> u64 {
    let step = |x: u64| ((u128::from(mul_mod(x, x, n)) + u128::from(c)) % u128::from(n)) as u64;
    let m = 128u64;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = step(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = step(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    g
}

/// Nontrivial factor of an odd composite n.
fn split_u64(n: u64) -> u64 {
    for c in 1.. {
        let g = brent_u64(n, c);
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn rho_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = split_u64(n);
    rho_u64(d, out);
    rho_u64(n / d, out);
}

/// Prime factors of `n >= 1` with multiplicity, unsorted.
fn prime_factors_u64(mut n: u64, out: &mut Vec<u64>) {
    debug_assert!(n >= 1);
    while n.is_multiple_of(2) {
        out.push(2);
        n /= 2;
    }
    while n.is_multiple_of(3) {
        out.push(3);
        n /= 3;
    }
    let mut d = 5u64;
    let mut checked = false;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= n {
        for cand in [d, d + 2] {
            while n.is_multiple_of(cand) {
                out.push(cand);
                n /= cand;
            }
        }
        d += 6;
        if !checked && d > 1024 {
            checked = true;
            if n > 1 && is_prime_u64(n) {
                out.push(n);
                return;
            }
        }
    }
    if n == 1 {
        return;
    }
    if d * d > n {
        out.push(n);
    } else {
        rho_u64(n, out);
    }
}

/// Factorization of a 64-bit integer as sorted (prime, exponent) pairs.
pub(crate) fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    prime_factors_u64(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some(last) if last.0 == p => last.1 += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn brent_big(n: &BigUint, c: u64) -> BigUint {
    let c = BigUint::from(c);
    let step = |x: &BigUint| (x * x + &c) % n;
    let m = 128u64;
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = step(&y);
                q = (&q * absdiff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = step(&ys);
            g = absdiff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    g
}

fn rho_big(n: BigUint, out: &mut Vec<BigUint>) {
    if let Some(small) = n.to_u64() {
        let mut v = Vec::new();
        prime_factors_u64(small, &mut v);
        out.extend(v.into_iter().map(BigUint::from));
        return;
    }
    if is_prime_biguint(&n) {
        out.push(n);
        return;
    }
    let mut c = 1u64;
    let d = loop {
        let g = brent_big(&n, c);
        if g != n {
            break g;
        }
        c += 1;
    };
    let rest = &n / &d;
    rho_big(d, out);
    rho_big(rest, out);
}

/// Prime factorization of `n >= 1`.
pub fn factorize(n: &BigInt) -> Result<PrimeFactorization> {
    if n.sign() != Sign::Plus {
        return Err(Error::domain("n", "at least 1", n.clone()));
    }
    if let Some(small) = n.to_u64() {
        let factors = factorize_u64(small)
            .into_iter()
            .map(|(p, e)| PrimePower {
                prime: BigInt::from(p),
                exponent: e,
            })
            .collect();
        return Ok(PrimeFactorization { factors });
    }
    let mut rem = n.magnitude().clone();
    let mut primes: Vec<BigUint> = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT {
        if rem.to_u64().is_some() {
            break;
        }
        let dd = BigUint::from(d);
        if &dd * &dd > rem {
            break;
        }
        loop {
            let (quot, r) = rem.div_rem(&dd);
            if !r.is_zero() {
                break;
            }
            primes.push(dd.clone());
            rem = quot;
        }
        if d == 1009 && is_prime_biguint(&rem) {
            break;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !rem.is_one() {
        rho_big(rem, &mut primes);
    }
    Ok(PrimeFactorization::from_sorted(primes))
}

/// Number of positive divisors of `n >= 1`.
pub fn divisor_count(n: &BigInt) -> Result<BigInt> {
    Ok(factorize(n)?.divisor_count())
}

/// All positive divisors of `n >= 1`, ascending.
pub fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    Ok(factorize(n)?.divisors())
}

/// Ordered pairs `(q1, q2)` with `q1 * q2 = q`, `q1` ascending.
pub fn divisor_pairs(q: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    Ok(divisors(q)?
        .into_iter()
        .map(|d| {
            let co = q / &d;
            (d, co)
        })
        .collect())
}
