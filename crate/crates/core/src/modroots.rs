//! Solutions of `x^k = a (mod m)`: per-prime-power lifting plus CRT.

use crate::bigint_serde;
use crate::error::{Error, Result};
use crate::kernel::{factorize, factorize_u64, is_prime, mul_mod, pow_mod};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Default upper limit on a single prime power `p^e` the solver will enumerate.
pub const DEFAULT_PRIME_POWER_CAP: u64 = 10_000_000;

/// Sorted residues in `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSet {
    #[serde(with = "bigint_serde")]
    modulus: BigInt,
    #[serde(with = "bigint_serde::vec")]
    residues: Vec<BigInt>,
}

impl ResidueSet {
    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn residues(&self) -> &[BigInt] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        self.residues
            .binary_search(&x.mod_floor(&self.modulus))
            .is_ok()
    }

    fn from_u64(modulus: BigInt, residues: Vec<u64>) -> Self {
        ResidueSet {
            modulus,
            residues: residues.into_iter().map(BigInt::from).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootOptions {
    /// Largest prime power `p^e` that may be enumerated.
    pub prime_power_cap: u64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            prime_power_cap: DEFAULT_PRIME_POWER_CAP,
        }
    }
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        Err(Error::domain("k", "at least 1", 0))
    } else {
        Ok(())
    }
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (a, m) = (i128::from(a), i128::from(m));
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m) as u64)
}

/// All `x` in `[0, p^e)` with `x^k = a`, for prime `p` and `p^e` below 2^63.
fn roots_prime_power_u64(a: u64, k: u32, p: u64, e: u32) -> Vec<u64> {
    let a_mod_p = a % p;
    let kk = u64::from(k);
    let mut roots: Vec<u64> = (0..p).filter(|&x| pow_mod(x, kk, p) == a_mod_p).collect();
    let mut modulus = p;
    let k_mod_p = kk % p;
    for _ in 1..e {
        let next = modulus * p;
        let target = a % next;
        let mut lifted = Vec::with_capacity(roots.len());
        for &x in &roots {
            let deriv = mul_mod(k_mod_p, pow_mod(x, kk - 1, p), p);
            if deriv != 0 {
                // f(x + s*modulus) = f(x) + s*modulus*f'(x)  (mod modulus*p)
                let fx = (pow_mod(x, kk, next) + next - target) % next;
                let c = (fx / modulus) % p;
                let inv = pow_mod(deriv, p - 2, p);
                let s = mul_mod((p - c) % p, inv, p);
                lifted.push(x + s * modulus);
            } else {
                lifted.extend(
                    (0..p)
                        .map(|s| x + s * modulus)
                        .filter(|&y| pow_mod(y, kk, next) == target),
                );
            }
        }
        lifted.sort_unstable();
        roots = lifted;
        modulus = next;
        if roots.is_empty() {
            break;
        }
    }
    roots
}

fn prime_power_u64(p: u64, e: u32, cap: u64) -> Result<u64> {
    match p.checked_pow(e) {
        Some(pe) if pe <= cap && pe < 1 << 63 => Ok(pe),
        _ => Err(Error::PrimePowerCap {
            prime_power: num_traits::pow(BigInt::from(p), e as usize),
            cap,
        }),
    }
}

/// Combines residues mod `m1` with residues mod a coprime `m2`.
fn crt_u64(r1: &[u64], m1: u64, r2: &[u64], m2: u64) -> Vec<u64> {
    let m = m1 * m2;
    let inv = inverse_mod(m1 % m2, m2).expect("CRT moduli must be coprime");
    let mut out = Vec::with_capacity(r1.len() * r2.len());
    for &x in r1 {
        for &y in r2 {
            let diff = (y + m2 - x % m2) % m2;
            let s = mul_mod(diff, inv, m2);
            out.push(x + m1 * s);
        }
    }
    debug_assert!(out.iter().all(|&v| v < m));
    out
}

fn crt_big(r1: &[BigInt], m1: &BigInt, r2: &[u64], m2: u64) -> Vec<BigInt> {
    let m2b = BigInt::from(m2);
    let m1_mod = m1.mod_floor(&m2b).to_u64().unwrap();
    let inv = inverse_mod(m1_mod, m2).expect("CRT moduli must be coprime");
    let mut out = Vec::with_capacity(r1.len() * r2.len());
    for x in r1 {
        let x_mod = x.mod_floor(&m2b).to_u64().unwrap();
        for &y in r2 {
            let diff = (y + m2 - x_mod) % m2;
            let s = mul_mod(diff, inv, m2);
            out.push(x + m1 * BigInt::from(s));
        }
    }
    out
}

/// Residues of `x^k = a (mod m)` for `m < 2^63`, `a` already reduced.
pub(crate) fn roots_mod_u64(a: u64, k: u32, m: u64, cap: u64) -> Result<Vec<u64>> {
    check_k(k)?;
    debug_assert!((1..1 << 63).contains(&m) && a < m);
    if m == 1 {
        return Ok(vec![0]);
    }
    let mut acc = vec![0u64];
    let mut acc_mod = 1u64;
    for (p, e) in factorize_u64(m) {
        let pe = prime_power_u64(p, e, cap)?;
        let local = roots_prime_power_u64(a % pe, k, p, e);
        if local.is_empty() {
            return Ok(Vec::new());
        }
        acc = crt_u64(&acc, acc_mod, &local, pe);
        acc_mod *= pe;
    }
    acc.sort_unstable();
    Ok(acc)
}

/// Cost-model inputs for solving `x^k = a (mod m)`: an estimate of the
/// number of roots (product of `gcd(k, phi(p^e))`) and of the enumeration
/// work (sum of `p * e`). `None` when some prime power exceeds `cap`.
pub(crate) fn root_count_estimate(k: u32, m: &BigInt, cap: u64) -> Option<(u128, u128)> {
    let fact = factorize(m).ok()?;
    let mut roots = 1u128;
    let mut work = 0u128;
    for f in fact.factors() {
        let p = f.prime.to_u64()?;
        let pe = prime_power_u64(p, f.exponent, cap).ok()?;
        let phi = pe / p * (p - 1);
        roots = roots.saturating_mul(u128::from(u64::from(k).gcd(&phi)));
        work += u128::from(p) * u128::from(f.exponent);
    }
    Some((roots, work))
}

/// All `x` in `[0, p^e)` with `x^k = a (mod p^e)`.
///
/// Roots mod `p` are found by enumeration and lifted one power at a time:
/// a root with `k x^(k-1)` nonzero mod `p` lifts uniquely, any other root is
/// lifted by trying all `p` extensions.
pub fn kth_roots_mod_prime_power(a: &BigInt, k: u32, p: &BigInt, e: u32) -> Result<ResidueSet> {
    kth_roots_mod_prime_power_with(a, k, p, e, &RootOptions::default())
}

pub fn kth_roots_mod_prime_power_with(
    a: &BigInt,
    k: u32,
    p: &BigInt,
    e: u32,
    opts: &RootOptions,
) -> Result<ResidueSet> {
    check_k(k)?;
    if e == 0 {
        return Err(Error::domain("e", "at least 1", 0));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let pe_big = num_traits::pow(p.clone(), e as usize);
    match pe_big.to_u64() {
        Some(v) if v <= opts.prime_power_cap && v < 1 << 63 => {}
        _ => {
            return Err(Error::PrimePowerCap {
                prime_power: pe_big,
                cap: opts.prime_power_cap,
            })
        }
    }
    let a_red = a.mod_floor(&pe_big).to_u64().unwrap();
    let roots = roots_prime_power_u64(a_red, k, p.to_u64().unwrap(), e);
    Ok(ResidueSet::from_u64(pe_big, roots))
}

/// All `x` in `[0, m)` with `x^k = a (mod m)`. `a` may be negative.
pub fn kth_roots_mod(a: &BigInt, k: u32, m: &BigInt) -> Result<ResidueSet> {
    kth_roots_mod_with(a, k, m, &RootOptions::default())
}

pub fn kth_roots_mod_with(
    a: &BigInt,
    k: u32,
    m: &BigInt,
    opts: &RootOptions,
) -> Result<ResidueSet> {
    check_k(k)?;
    if m.sign() != Sign::Plus {
        return Err(Error::domain("m", "at least 1", m.clone()));
    }
    let a_red = a.mod_floor(m);
    if let Some(small) = m.to_u64().filter(|&v| v < 1 << 63) {
        let roots = roots_mod_u64(a_red.to_u64().unwrap(), k, small, opts.prime_power_cap)?;
        return Ok(ResidueSet::from_u64(m.clone(), roots));
    }
    let fact = factorize(m)?;
    let mut acc = vec![BigInt::zero()];
    let mut acc_mod = BigInt::one();
    for f in fact.factors() {
        let local = kth_roots_mod_prime_power_with(&a_red, k, &f.prime, f.exponent, opts)?;
        if local.is_empty() {
            return Ok(ResidueSet {
                modulus: m.clone(),
                residues: Vec::new(),
            });
        }
        let pe = local.modulus().to_u64().unwrap();
        let local: Vec<u64> = local
            .residues()
            .iter()
            .map(|r| r.to_u64().unwrap())
            .collect();
        acc = crt_big(&acc, &acc_mod, &local, pe);
        acc_mod *= pe;
    }
    acc.sort();
    Ok(ResidueSet {
        modulus: m.clone(),
        residues: acc,
    })
}
