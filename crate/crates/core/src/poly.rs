//! Integer-coefficient univariate polynomials.

use crate::bigint_serde;
use crate::error::{Error, Result};
use crate::kernel::{signed_root_ceil, signed_root_floor};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Polynomial with `coeffs[i]` the coefficient of `t^i`. The highest stored
/// coefficient is nonzero; the zero polynomial stores nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    #[serde(with = "bigint_serde::vec")]
    coefficients: Vec<BigInt>,
}

impl From<Poly> for PolyRepr {
    fn from(p: Poly) -> Self {
        PolyRepr {
            coefficients: p.coeffs,
        }
    }
}

impl TryFrom<PolyRepr> for Poly {
    type Error = Error;
    fn try_from(r: PolyRepr) -> Result<Self> {
        if r.coefficients.last().is_some_and(Zero::is_zero) {
            return Err(Error::Parse("leading coefficient must be nonzero".into()));
        }
        Ok(Poly {
            coeffs: r.coefficients,
        })
    }
}

impl Poly {
    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// The monomial `t^k`.
    pub fn monomial(k: u32) -> Self {
        let mut coeffs = vec![BigInt::zero(); k as usize];
        coeffs.push(BigInt::one());
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// `Some(k)` when the polynomial is exactly `t^k` with `k >= 1`.
    pub fn as_monomial(&self) -> Option<u32> {
        let (lead, rest) = self.coeffs.split_last()?;
        if rest.is_empty() || !lead.is_one() || !rest.iter().all(Zero::is_zero) {
            return None;
        }
        u32::try_from(rest.len()).ok()
    }

    fn require_nonconstant(&self) -> Result<usize> {
        match self.degree() {
            Some(d) if d >= 1 => Ok(d),
            _ => Err(Error::ConstantPolynomial),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// The polynomial `Q` with `P(t) - P(t0) = (t - t0) Q(t)`, by synthetic
    /// division at `t0`.
    pub fn difference_quotient(&self, t0: &BigInt) -> Result<Poly> {
        let deg = self.require_nonconstant()?;
        let mut out = vec![BigInt::zero(); deg];
        let mut carry = BigInt::zero();
        for j in (1..=deg).rev() {
            carry = carry * t0 + &self.coeffs[j];
            out[j - 1] = carry.clone();
        }
        // out[deg-1] is the leading coefficient, nonzero.
        Ok(Poly { coeffs: out })
    }

    /// `P - c`.
    pub fn minus_constant(&self, c: &BigInt) -> Poly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        coeffs[0] -= c;
        Poly::new(coeffs)
    }

    /// Cauchy root bound `ceil(1 + max_i |c_i| / |c_lead|)`: every real root
    /// has absolute value below it.
    pub fn cauchy_bound(&self) -> Result<BigInt> {
        let deg = self.require_nonconstant()?;
        let lead = self.coeffs[deg].abs();
        let max = self.coeffs[..deg]
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_default();
        Ok(BigInt::one() + max.div_ceil(&lead))
    }
}

impl FromStr for Poly {
    type Err = Error;

    /// Parses `"c0,c1,...,ck"`: decimal integers, lowest degree first.
    fn from_str(s: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (idx, part) in s.split(',').enumerate() {
            let part = part.trim();
            let c = crate::parse_int(part).map_err(|_| {
                Error::Parse(format!("coefficient {idx} ({part:?}) is not an integer"))
            })?;
            coeffs.push(c);
        }
        Ok(Poly::new(coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.sign() == Sign::Minus {
                    write!(f, "-")?;
                }
            } else if c.sign() == Sign::Minus {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}t^{i}")?,
            }
        }
        Ok(())
    }
}

fn range_inclusive(lo: &BigInt, hi: &BigInt, out: &mut Vec<BigInt>) {
    let mut t = lo.clone();
    while &t <= hi {
        out.push(t.clone());
        t += 1;
    }
}

/// All integers `t` with `lo <= P(t) <= hi`, ascending.
///
/// The search window is `[-B, B]` with `B` the larger Cauchy bound of
/// `P - lo` and `P - hi`; `t^k` instead uses exact integer roots. Fails with
/// [`Error::WindowExceedsCap`] when the window bound is above `t_cap`.
pub fn preimage_range(p: &Poly, lo: &BigInt, hi: &BigInt, t_cap: &BigInt) -> Result<Vec<BigInt>> {
    p.require_nonconstant()?;
    if lo > hi {
        return Err(Error::EmptyRange("lo > hi"));
    }
    if t_cap.sign() == Sign::Minus {
        return Err(Error::domain("t_cap", "nonnegative", t_cap.clone()));
    }
    if let Some(k) = p.as_monomial() {
        return monomial_preimage(k, lo, hi, t_cap);
    }
    let bound = p
        .minus_constant(lo)
        .cauchy_bound()?
        .max(p.minus_constant(hi).cauchy_bound()?);
    if &bound > t_cap {
        return Err(Error::WindowExceedsCap {
            bound,
            cap: t_cap.clone(),
        });
    }
    let mut out = Vec::new();
    let mut t = -&bound;
    while t <= bound {
        let v = p.eval(&t);
        if &v >= lo && &v <= hi {
            out.push(t.clone());
        }
        t += 1;
    }
    Ok(out)
}

/// Integer window(s) of `t` with `t^k` in `[lo, hi]`, as disjoint ascending
/// inclusive ranges.
pub(crate) fn monomial_windows(k: u32, lo: &BigInt, hi: &BigInt) -> Vec<(BigInt, BigInt)> {
    if k.is_odd() {
        let a = signed_root_ceil(lo, k);
        let b = signed_root_floor(hi, k);
        return if a <= b { vec![(a, b)] } else { vec![] };
    }
    if hi.sign() == Sign::Minus {
        return vec![];
    }
    let low = if lo.sign() == Sign::Minus {
        BigInt::zero()
    } else {
        lo.clone()
    };
    let a = signed_root_ceil(&low, k);
    let b = signed_root_floor(hi, k);
    if a > b {
        return vec![];
    }
    if a.is_zero() {
        vec![(-&b, b)]
    } else {
        vec![(-&b, -&a), (a, b)]
    }
}

fn monomial_preimage(k: u32, lo: &BigInt, hi: &BigInt, t_cap: &BigInt) -> Result<Vec<BigInt>> {
    let windows = monomial_windows(k, lo, hi);
    let bound = windows
        .iter()
        .flat_map(|(a, b)| [a.abs(), b.abs()])
        .max()
        .unwrap_or_default();
    if &bound > t_cap {
        return Err(Error::WindowExceedsCap {
            bound,
            cap: t_cap.clone(),
        });
    }
    let mut out = Vec::new();
    for (a, b) in &windows {
        range_inclusive(a, b, &mut out);
    }
    Ok(out)
}
