//! Exact counting of `t` with `P(t)` in an arithmetic progression.
//!
//! For `P = t^k` two independent engines are available:
//!
//! * interval walk: scan every `t` whose kth power lies between the first
//!   and last term and keep those with `t^k = a (mod q)`;
//! * residue stride: solve `x^k = a (mod q)` once, then count, inside the
//!   same root window, the integers in each residue class.
//!
//! Both run on `i128` when the value range fits comfortably, on `BigInt`
//! otherwise.

use crate::bigint_serde;
use crate::error::{Error, Result};
use crate::kernel::{root_floor_u128, signed_root_ceil, signed_root_floor};
use crate::modroots::{self, RootOptions};
use crate::poly::{preimage_range, Poly};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt::Debug;

/// The terms `a + i*q` for `1 <= i <= N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ProgressionRepr", into = "ProgressionRepr")]
pub struct Progression {
    a: BigInt,
    q: BigInt,
    n: BigInt,
}

#[derive(Serialize, Deserialize)]
struct ProgressionRepr {
    #[serde(with = "bigint_serde")]
    a: BigInt,
    #[serde(with = "bigint_serde")]
    q: BigInt,
    #[serde(rename = "N", with = "bigint_serde")]
    n: BigInt,
}

impl From<Progression> for ProgressionRepr {
    fn from(p: Progression) -> Self {
        ProgressionRepr {
            a: p.a,
            q: p.q,
            n: p.n,
        }
    }
}

impl TryFrom<ProgressionRepr> for Progression {
    type Error = Error;
    fn try_from(r: ProgressionRepr) -> Result<Self> {
        Progression::new(r.a, r.q, r.n)
    }
}

/// Offset of the refined Rudin progression `{24n + 1 : 0 <= n < N}` in the
/// `a + i*q, 1 <= i <= N` convention: `a = 1 - q`.
pub const RUDIN_STEP: i64 = 24;
pub const RUDIN_OFFSET: i64 = 1 - RUDIN_STEP;

impl Progression {
    pub fn new(a: BigInt, q: BigInt, n: BigInt) -> Result<Self> {
        if q.sign() != Sign::Plus {
            return Err(Error::domain("q", "at least 1", q));
        }
        if n.sign() != Sign::Plus {
            return Err(Error::domain("N", "at least 1", n));
        }
        Ok(Progression { a, q, n })
    }

    pub fn from_i64(a: i64, q: i64, n: i64) -> Result<Self> {
        Progression::new(a.into(), q.into(), n.into())
    }

    /// Accepts any nonzero step; a negative step describes the same set as
    /// step `|q|` with offset `a + (N+1) q`.
    pub fn with_signed_step(a: BigInt, q: BigInt, n: BigInt) -> Result<Self> {
        match q.sign() {
            Sign::Plus => Progression::new(a, q, n),
            Sign::NoSign => Err(Error::domain("q", "nonzero", q)),
            Sign::Minus => {
                let offset = &a + (&n + 1u32) * &q;
                Progression::new(offset, -q, n)
            }
        }
    }

    /// `{24n + 1 : 0 <= n <= N - 1}`.
    pub fn rudin(n: BigInt) -> Result<Self> {
        Progression::new(RUDIN_OFFSET.into(), RUDIN_STEP.into(), n)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn term(&self, i: &BigInt) -> BigInt {
        &self.a + i * &self.q
    }

    pub fn first(&self) -> BigInt {
        &self.a + &self.q
    }

    pub fn last(&self) -> BigInt {
        self.term(&self.n)
    }

    /// The index `i` in `[1, N]` with `a + i*q = value`, if any.
    pub fn index_of(&self, value: &BigInt) -> Option<BigInt> {
        let (i, r) = (value - &self.a).div_mod_floor(&self.q);
        (r.is_zero() && i.sign() == Sign::Plus && i <= self.n).then_some(i)
    }
}

/// Which engine counts `t^k` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    #[default]
    Auto,
    IntervalWalk,
    ResidueStride,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CountOptions {
    pub algorithm: Algorithm,
    pub with_solutions: bool,
    pub roots: RootOptions,
}

/// A solution `P(t) = a + i*q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Solution {
    #[serde(with = "bigint_serde")]
    pub t: BigInt,
    #[serde(with = "bigint_serde")]
    pub i: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    /// Number of integers `t` with `P(t)` a term of the progression.
    #[serde(with = "bigint_serde")]
    pub count_t: BigInt,
    /// Number of distinct terms that are values of `P`.
    #[serde(with = "bigint_serde")]
    pub count_values: BigInt,
    /// Solutions sorted by `t`, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<Solution>>,
}

// Arithmetic shared by the i128 and BigInt engines.
trait Word: Clone + Ord + Integer + Signed + Debug {
    fn to_big(&self) -> BigInt;
    fn pow_k(&self, k: u32) -> Self;
    /// `self^k mod m` in `[0, m)`.
    fn pow_mod(&self, k: u32, m: &Self) -> Self;
    fn root_floor(&self, k: u32) -> Self;
    fn root_ceil(&self, k: u32) -> Self;
}

impl Word for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn pow_k(&self, k: u32) -> Self {
        self.pow(k)
    }
    fn pow_mod(&self, k: u32, m: &Self) -> Self {
        // m < 2^62 on this path, so products fit in u128.
        let m = *m as u128;
        let mut base = self.rem_euclid(m as i128) as u128;
        let mut acc = 1 % m;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as i128
    }
    fn root_floor(&self, k: u32) -> Self {
        if *self >= 0 {
            root_floor_u128(*self as u128, k) as i128
        } else {
            -(self.unsigned_abs().root_ceil_u(k) as i128)
        }
    }
    fn root_ceil(&self, k: u32) -> Self {
        if *self >= 0 {
            (*self as u128).root_ceil_u(k) as i128
        } else {
            -(root_floor_u128(self.unsigned_abs(), k) as i128)
        }
    }
}

trait CeilRoot {
    fn root_ceil_u(self, k: u32) -> u128;
}

impl CeilRoot for u128 {
    fn root_ceil_u(self, k: u32) -> u128 {
        let r = root_floor_u128(self, k);
        if r.checked_pow(k) == Some(self) {
            r
        } else {
            r + 1
        }
    }
}

impl Word for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn pow_k(&self, k: u32) -> Self {
        num_traits::pow(self.clone(), k as usize)
    }
    fn pow_mod(&self, k: u32, m: &Self) -> Self {
        self.mod_floor(m).modpow(&BigInt::from(k), m)
    }
    fn root_floor(&self, k: u32) -> Self {
        signed_root_floor(self, k)
    }
    fn root_ceil(&self, k: u32) -> Self {
        signed_root_ceil(self, k)
    }
}

/// Inclusive `t` window; `nonneg` marks the part counted by `count_values`.
#[derive(Debug, Clone)]
struct Window<W> {
    lo: W,
    hi: W,
    nonneg: bool,
}

struct Problem<W> {
    k: u32,
    a: W,
    q: W,
    n: W,
    a_mod_q: W,
    windows: Vec<Window<W>>,
}

impl<W: Word> Problem<W> {
    fn new(k: u32, a: W, q: W, n: W) -> Self {
        let lo = a.clone() + q.clone();
        let hi = a.clone() + n.clone() * q.clone();
        let a_mod_q = a.mod_floor(&q);
        let windows = Self::windows(k, &lo, &hi);
        Problem {
            k,
            a,
            q,
            n,
            a_mod_q,
            windows,
        }
    }

    fn windows(k: u32, lo: &W, hi: &W) -> Vec<Window<W>> {
        if k.is_odd() {
            let (a, b) = (lo.root_ceil(k), hi.root_floor(k));
            return if a <= b {
                vec![Window {
                    lo: a,
                    hi: b,
                    nonneg: true,
                }]
            } else {
                vec![]
            };
        }
        if hi.is_negative() {
            return vec![];
        }
        let low = if lo.is_negative() {
            W::zero()
        } else {
            lo.clone()
        };
        let (a, b) = (low.root_ceil(k), hi.root_floor(k));
        if a > b {
            return vec![];
        }
        let neg_hi = if a.is_zero() { -W::one() } else { -a.clone() };
        let mut out = Vec::with_capacity(2);
        if -b.clone() <= neg_hi {
            out.push(Window {
                lo: -b.clone(),
                hi: neg_hi,
                nonneg: false,
            });
        }
        out.push(Window {
            lo: a,
            hi: b,
            nonneg: true,
        });
        out
    }

    fn width(&self) -> W {
        self.windows.iter().fold(W::zero(), |acc, w| {
            acc + (w.hi.clone() - w.lo.clone()) + W::one()
        })
    }

    fn index(&self, t: &W) -> Result<W> {
        let v = t.pow_k(self.k);
        let (i, r) = (v - self.a.clone()).div_mod_floor(&self.q);
        if !r.is_zero() || i < W::one() || i > self.n {
            return Err(Error::Invariant(format!(
                "t={t:?} passed the congruence and window checks but has index {i:?} (remainder {r:?})"
            )));
        }
        Ok(i)
    }

    /// Endpoint check for arithmetic counting: both extremes of every window
    /// must have kth powers inside the value interval.
    fn check_windows(&self) -> Result<()> {
        let lo = self.a.clone() + self.q.clone();
        let hi = self.a.clone() + self.n.clone() * self.q.clone();
        for w in &self.windows {
            for e in [&w.lo, &w.hi] {
                let v = e.pow_k(self.k);
                if v < lo || v > hi {
                    return Err(Error::Invariant(format!(
                        "root window endpoint {e:?} outside value range"
                    )));
                }
            }
        }
        Ok(())
    }
}

struct Tally<W> {
    count_t: W,
    count_values: W,
    solutions: Option<Vec<(W, W)>>,
}

impl<W: Word> Tally<W> {
    fn new(with_solutions: bool) -> Self {
        Tally {
            count_t: W::zero(),
            count_values: W::zero(),
            solutions: with_solutions.then(Vec::new),
        }
    }

    fn add(&mut self, nonneg: bool, amount: W) {
        if nonneg {
            self.count_values = self.count_values.clone() + amount.clone();
        }
        self.count_t = self.count_t.clone() + amount;
    }

    fn into_report(self, k: u32) -> CountReport {
        // Odd k is injective on the integers.
        let count_values = if k.is_odd() {
            self.count_t.clone()
        } else {
            self.count_values
        };
        CountReport {
            count_t: self.count_t.to_big(),
            count_values: count_values.to_big(),
            solutions: self.solutions.map(|mut v| {
                v.sort();
                v.into_iter()
                    .map(|(t, i)| Solution {
                        t: t.to_big(),
                        i: i.to_big(),
                    })
                    .collect()
            }),
        }
    }
}

fn interval_walk<W: Word>(p: &Problem<W>, with_solutions: bool) -> Result<Tally<W>> {
    let mut tally = Tally::new(with_solutions);
    for w in &p.windows {
        let mut t = w.lo.clone();
        while t <= w.hi {
            if t.pow_mod(p.k, &p.q) == p.a_mod_q {
                tally.add(w.nonneg, W::one());
                if let Some(sols) = tally.solutions.as_mut() {
                    let i = p.index(&t)?;
                    sols.push((t.clone(), i));
                }
            }
            t = t + W::one();
        }
    }
    Ok(tally)
}

fn residue_stride<W: Word>(p: &Problem<W>, roots: &[W], with_solutions: bool) -> Result<Tally<W>> {
    let mut tally = Tally::new(with_solutions);
    if !with_solutions {
        p.check_windows()?;
    }
    for w in &p.windows {
        for r in roots {
            let first = w.lo.clone() + (r.clone() - w.lo.clone()).mod_floor(&p.q);
            if first > w.hi {
                continue;
            }
            match tally.solutions.as_mut() {
                None => {
                    let n = (w.hi.clone() - first).div_floor(&p.q) + W::one();
                    tally.add(w.nonneg, n);
                }
                Some(sols) => {
                    let mut t = first;
                    let mut n = W::zero();
                    while t <= w.hi {
                        let i = p.index(&t)?;
                        sols.push((t.clone(), i));
                        n = n + W::one();
                        t = t + p.q.clone();
                    }
                    tally.add(w.nonneg, n);
                }
            }
        }
    }
    Ok(tally)
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        Err(Error::domain("k", "at least 1", 0))
    } else {
        Ok(())
    }
}

/// i128 is used when every term and `q` are far from overflow.
fn small_problem(k: u32, prog: &Progression) -> Option<Problem<i128>> {
    const VALUE_LIMIT: i128 = 1 << 100;
    const STEP_LIMIT: i128 = 1 << 62;
    let a = prog.a.to_i128()?;
    let q = prog.q.to_i128()?;
    let n = prog.n.to_i128()?;
    let lo = prog.first().to_i128()?;
    let hi = prog.last().to_i128()?;
    if q >= STEP_LIMIT || lo.abs() >= VALUE_LIMIT || hi.abs() >= VALUE_LIMIT {
        return None;
    }
    Some(Problem::new(k, a, q, n))
}

fn big_problem(k: u32, prog: &Progression) -> Problem<BigInt> {
    Problem::new(k, prog.a.clone(), prog.q.clone(), prog.n.clone())
}

/// The engine `Auto` resolves to: the cheaper of the two by estimated work.
///
/// Interval walk costs one step per `t` in the root window. Residue stride
/// costs the root finding (roughly the sum of the primes of `q`) plus one
/// step per residue class, or per solution when solutions are listed.
pub fn choose_algorithm(k: u32, prog: &Progression, opts: &CountOptions) -> Algorithm {
    if opts.algorithm != Algorithm::Auto {
        return opts.algorithm;
    }
    let width = big_problem_width(k, prog);
    let Some((roots, work)) = modroots::root_count_estimate(k, &prog.q, opts.roots.prime_power_cap)
    else {
        return Algorithm::IntervalWalk;
    };
    let q = prog.q.to_u128().unwrap_or(u128::MAX);
    let per_root = if opts.with_solutions {
        width.to_u128().unwrap_or(u128::MAX) / q + 1
    } else {
        2
    };
    let stride_cost = BigInt::from(work) + BigInt::from(roots.saturating_mul(per_root));
    if stride_cost < width {
        Algorithm::ResidueStride
    } else {
        Algorithm::IntervalWalk
    }
}

fn big_problem_width(k: u32, prog: &Progression) -> BigInt {
    match small_problem(k, prog) {
        Some(p) => BigInt::from(p.width()),
        None => big_problem(k, prog).width(),
    }
}

/// Counts `t` with `t^k` a term of `prog`; see [`count_powers_in_ap_with`].
pub fn count_powers_in_ap(k: u32, prog: &Progression, with_solutions: bool) -> Result<CountReport> {
    count_powers_in_ap_with(
        k,
        prog,
        &CountOptions {
            with_solutions,
            ..CountOptions::default()
        },
    )
}

pub fn count_powers_in_ap_with(
    k: u32,
    prog: &Progression,
    opts: &CountOptions,
) -> Result<CountReport> {
    check_k(k)?;
    let algorithm = choose_algorithm(k, prog, opts);
    let sols = opts.with_solutions;
    if let Some(p) = small_problem(k, prog) {
        let tally = match algorithm {
            Algorithm::ResidueStride => {
                let a = p.a_mod_q as u64;
                let roots: Vec<i128> =
                    modroots::roots_mod_u64(a, k, p.q as u64, opts.roots.prime_power_cap)?
                        .into_iter()
                        .map(i128::from)
                        .collect();
                residue_stride(&p, &roots, sols)?
            }
            _ => interval_walk(&p, sols)?,
        };
        return Ok(tally.into_report(k));
    }
    let p = big_problem(k, prog);
    let tally = match algorithm {
        Algorithm::ResidueStride => {
            let set = modroots::kth_roots_mod_with(&p.a_mod_q, k, &p.q, &opts.roots)?;
            residue_stride(&p, set.residues(), sols)?
        }
        _ => interval_walk(&p, sols)?,
    };
    Ok(tally.into_report(k))
}

/// Counts `t` with `P(t)` a term of `prog`, scanning the root window of the
/// value interval. Fails when that window exceeds `t_cap`.
pub fn count_poly_in_ap(
    p: &Poly,
    prog: &Progression,
    t_cap: &BigInt,
    with_solutions: bool,
) -> Result<CountReport> {
    let sols = enumerate_solutions(p, prog, t_cap)?;
    let mut values: Vec<BigInt> = sols.iter().map(|s| prog.term(&s.i)).collect();
    values.sort();
    values.dedup();
    Ok(CountReport {
        count_t: BigInt::from(sols.len()),
        count_values: BigInt::from(values.len()),
        solutions: with_solutions.then_some(sols),
    })
}

/// All `(t, i)` with `P(t) = a + i*q`, `1 <= i <= N`, sorted by `t`.
pub fn enumerate_solutions(p: &Poly, prog: &Progression, t_cap: &BigInt) -> Result<Vec<Solution>> {
    let ts = preimage_range(p, &prog.first(), &prog.last(), t_cap)?;
    Ok(ts
        .into_iter()
        .filter_map(|t| {
            let i = prog.index_of(&p.eval(&t))?;
            Some(Solution { t, i })
        })
        .collect())
}
