//! Divisor-splitting witnesses for pairs of solutions.
//!
//! For solutions `t != t0` with `P(t) = a + i q` and `P(t0) = a + i0 q`,
//! write `P(t) - P(t0) = (t - t0) Q(t)`. The canonical split
//! `q1 = gcd(q, |t - t0|)`, `q2 = q / q1` gives `|t - t0| = n1 q1` and, since
//! `q | (t - t0) Q(t)` with `gcd(q2, n1) = 1`, `|Q(t)| = n2 q2` with
//! `n1 n2 = |i - i0| <= N - 1`.

use crate::bigint_serde;
use crate::counting::Progression;
use crate::error::{Error, Result};
use crate::poly::Poly;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Which branch of the case split a witness falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitCase {
    /// `n1^d <= N`: few possible steps `t - t0`.
    ShortStep,
    /// `n1^d > N` and `n2^d <= N^(d-1)`: the quotient value is small.
    SmallQuotient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "bigint_serde")]
    pub t: BigInt,
    #[serde(with = "bigint_serde")]
    pub t0: BigInt,
    #[serde(with = "bigint_serde")]
    pub i: BigInt,
    #[serde(with = "bigint_serde")]
    pub i0: BigInt,
    #[serde(with = "bigint_serde")]
    pub q1: BigInt,
    #[serde(with = "bigint_serde")]
    pub q2: BigInt,
    #[serde(with = "bigint_serde")]
    pub n1: BigInt,
    #[serde(with = "bigint_serde")]
    pub n2: BigInt,
    /// `Q(t)` where `Q` is the difference quotient of `P` at `t0`.
    #[serde(with = "bigint_serde")]
    pub quotient_value: BigInt,
    /// Sign of `t - t0` (never 0).
    pub step_sign: i8,
    /// Sign of `Q(t)` (0 when `P(t) = P(t0)`).
    pub quotient_sign: i8,
    pub case: SplitCase,
}

/// Outcome of each exact check performed on a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessChecks {
    pub q1_times_q2_is_q: bool,
    pub q1_divides_step: bool,
    pub q2_divides_quotient: bool,
    pub factorization_identity: bool,
    pub n1n2_is_index_gap: bool,
    pub n1n2_below_length: bool,
    pub case_split_holds: bool,
}

impl WitnessChecks {
    pub fn all(&self) -> bool {
        self.q1_times_q2_is_q
            && self.q1_divides_step
            && self.q2_divides_quotient
            && self.factorization_identity
            && self.n1n2_is_index_gap
            && self.n1n2_below_length
            && self.case_split_holds
    }
}

fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn classify(n1: &BigInt, n2: &BigInt, n: &BigInt, degree: usize) -> Option<SplitCase> {
    if num_traits::pow(n1.clone(), degree) <= *n {
        Some(SplitCase::ShortStep)
    } else if num_traits::pow(n2.clone(), degree) <= num_traits::pow(n.clone(), degree - 1) {
        Some(SplitCase::SmallQuotient)
    } else {
        None
    }
}

impl Witness {
    /// Re-runs every check against `P` and the progression.
    pub fn checks(&self, p: &Poly, prog: &Progression) -> WitnessChecks {
        let q = prog.q();
        let step = &self.t - &self.t0;
        let gap = (&self.i - &self.i0).abs();
        let product = &self.n1 * &self.n2;
        let degree = p.degree().unwrap_or(0).max(1);
        WitnessChecks {
            q1_times_q2_is_q: &(&self.q1 * &self.q2) == q,
            q1_divides_step: step.abs() == &self.n1 * &self.q1,
            q2_divides_quotient: self.quotient_value.abs() == &self.n2 * &self.q2,
            factorization_identity: p.eval(&self.t) - p.eval(&self.t0)
                == &step * &self.quotient_value,
            n1n2_is_index_gap: product == gap,
            n1n2_below_length: product < *prog.n(),
            case_split_holds: classify(&self.n1, &self.n2, prog.n(), degree) == Some(self.case),
        }
    }
}

/// Builds the canonical witness with `q1 = gcd(q, |t - t0|)` and verifies it.
///
/// Fails with an input error when `t = t0` or either value is not a term,
/// and with [`Error::Invariant`] if a check fails on valid input.
pub fn extract_witness(p: &Poly, prog: &Progression, t: &BigInt, t0: &BigInt) -> Result<Witness> {
    if t == t0 {
        return Err(Error::EqualPoints(t.clone()));
    }
    let quotient = p.difference_quotient(t0)?;
    let (i, i0) = (term_index(p, prog, t)?, term_index(p, prog, t0)?);
    build(p, prog, t, t0, i, i0, quotient.eval(t))
}

fn term_index(p: &Poly, prog: &Progression, t: &BigInt) -> Result<BigInt> {
    let value = p.eval(t);
    prog.index_of(&value)
        .ok_or_else(|| Error::NotInProgression {
            t: t.clone(),
            value,
        })
}

/// Witness construction when the indices and `Q(t)` are already known.
pub(crate) fn build(
    p: &Poly,
    prog: &Progression,
    t: &BigInt,
    t0: &BigInt,
    i: BigInt,
    i0: BigInt,
    quotient_value: BigInt,
) -> Result<Witness> {
    let q = prog.q();
    let step = t - t0;
    let q1 = q.gcd(&step);
    let q2 = q / &q1;
    let n1 = step.abs() / &q1;
    let (n2, rem) = quotient_value.abs().div_rem(&q2);
    if !rem.is_zero() {
        return Err(Error::Invariant(format!(
            "q2={q2} does not divide Q(t)={quotient_value} for t={t}, t0={t0}"
        )));
    }
    let degree = p.degree().ok_or(Error::ConstantPolynomial)?.max(1);
    let case = classify(&n1, &n2, prog.n(), degree).ok_or_else(|| {
        Error::Invariant(format!(
            "case split fails for n1={n1}, n2={n2}, N={}",
            prog.n()
        ))
    })?;
    let witness = Witness {
        t: t.clone(),
        t0: t0.clone(),
        i,
        i0,
        q1,
        q2,
        n1,
        n2,
        step_sign: sign_of(&step),
        quotient_sign: sign_of(&quotient_value),
        quotient_value,
        case,
    };
    let checks = witness.checks(p, prog);
    if !checks.all() {
        return Err(Error::Invariant(format!(
            "witness checks failed for t={t}, t0={t0}: {checks:?}"
        )));
    }
    Ok(witness)
}
