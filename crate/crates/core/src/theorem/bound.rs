//! The explicit bound `C_k * d(q)^(k-1) * ceil(N^(1/k))`.
//!
//! The constant comes from running the induction on the degree with every
//! count made explicit (see `docs/bound-constant.md`). Fix one solution
//! `t0`. Every other solution `t` picks a divisor pair `(q1, q2)`, and then
//! either `n1 <= ceil(N^(1/(k+1)))`, which leaves at most that many `t`, or
//! the quotient value is small and the degree-`k` bound applies with
//! `d(q2) <= d(q)`. Summing over the `d(q)` pairs:
//!
//! ```text
//! count <= 1 + d(q) * (X + C_k * d(q)^(k-1) * X) <= (C_k + 2) * d(q)^k * X
//! ```
//!
//! with `X = ceil(N^(1/(k+1)))`, since `1 <= d^k X` and `d X <= d^k X`.
//! Equality holds at `d = X = 1`, so `C_(k+1) = C_k + 2` is the smallest
//! constant this accounting supports, and `C_1 = 1` gives `C_k = 2k - 1`.

use crate::bigint_serde;
use crate::error::{Error, Result};
use crate::kernel::{divisor_count, ikth_root_ceil};
use num_bigint::{BigInt, Sign};
use num_traits::One;
use serde::{Deserialize, Serialize};

/// `C_k` by the recurrence `C_1 = 1`, `C_(k+1) = C_k + 2`.
pub fn bound_constant(k: u32) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::domain("k", "at least 1", 0));
    }
    let mut c = BigInt::one();
    for _ in 1..k {
        c += 2;
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    pub k: u32,
    #[serde(with = "bigint_serde")]
    pub constant: BigInt,
}

impl BoundParams {
    pub fn new(k: u32) -> Result<Self> {
        Ok(BoundParams {
            k,
            constant: bound_constant(k)?,
        })
    }

    /// `d(q)^(k-1) * ceil(N^(1/k))`, the bound without its constant.
    pub fn scale(&self, q: &BigInt, n: &BigInt) -> Result<BigInt> {
        if n.sign() != Sign::Plus {
            return Err(Error::domain("N", "at least 1", n.clone()));
        }
        let d = divisor_count(q)?;
        Ok(num_traits::pow(d, (self.k - 1) as usize) * ikth_root_ceil(n, self.k)?)
    }

    pub fn bound_value(&self, q: &BigInt, n: &BigInt) -> Result<BigInt> {
        Ok(&self.constant * self.scale(q, n)?)
    }
}

/// `C_k * d(q)^(k-1) * ceil(N^(1/k))`.
pub fn theorem_bound(k: u32, q: &BigInt, n: &BigInt) -> Result<BigInt> {
    BoundParams::new(k)?.bound_value(q, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(k: u32, q: i64, n: i64) -> BigInt {
        theorem_bound(k, &q.into(), &n.into()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(b(1, 360, 50), 50.into());
        assert_eq!(b(2, 24, 100), 240.into());
        assert_eq!(b(3, 2, 1000), 200.into());
        assert!(theorem_bound(0, &1.into(), &1.into()).is_err());
        assert!(theorem_bound(2, &0.into(), &1.into()).is_err());
        assert!(theorem_bound(2, &1.into(), &0.into()).is_err());
    }

    /// Walks the induction numerically: the smallest integer `c` with
    /// `1 + d X + C_k d^k X <= c d^k X` over a grid of `d, X >= 1` and `k`.
    fn induction_step(c_k: u128, k: u32) -> u128 {
        let mut best = 0;
        for d in 1..=20u128 {
            for x in 1..=20u128 {
                let dk = d.pow(k);
                best = best.max((1 + d * x + c_k * dk * x).div_ceil(dk * x));
            }
        }
        best
    }

    #[test]
    fn constant_matches_induction_walk() {
        let mut c = 1u128;
        for k in 1..=10u32 {
            assert_eq!(bound_constant(k).unwrap(), BigInt::from(c));
            assert_eq!(bound_constant(k).unwrap(), (2 * k - 1).into());
            c = induction_step(c, k);
        }
    }

    #[test]
    fn monotone_in_divisor_count_and_length() {
        for k in 1..=4u32 {
            let params = BoundParams::new(k).unwrap();
            let mut prev = BigInt::from(0);
            for n in 1..=2000i64 {
                let v = params.bound_value(&12.into(), &n.into()).unwrap();
                assert!(v >= prev);
                prev = v;
            }
            // d(1)=1 < d(2)=2 < d(4)=3 < d(12)=6 < d(360)=24
            let mut prev = BigInt::from(0);
            for q in [1i64, 2, 4, 12, 360] {
                let v = params.bound_value(&q.into(), &77.into()).unwrap();
                assert!(v >= prev);
                prev = v;
            }
        }
    }
}
