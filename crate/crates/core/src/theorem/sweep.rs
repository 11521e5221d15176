//! Exhaustive verification of the bound over parameter grids.

use super::bound::BoundParams;
use super::witness::{build, SplitCase};
use crate::bigint_serde;
use crate::counting::{
    count_poly_in_ap, count_powers_in_ap_with, Algorithm, CountOptions, CountReport, Progression,
    Solution,
};
use crate::error::{Error, Result, Violation};
use crate::kernel::ikth_root_floor;
use crate::poly::Poly;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Which offsets `a` are swept for each step `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AMode {
    /// `a` in `[0, q)`.
    Residues,
    /// `a` in `[-q, q]`.
    #[default]
    Window,
}

impl AMode {
    fn offsets(self, q: u64) -> impl Iterator<Item = i128> {
        let q = i128::from(q);
        match self {
            AMode::Residues => 0..q,
            AMode::Window => -q..q + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub k_set: Vec<u32>,
    pub q_min: u64,
    pub q_max: u64,
    pub a_mode: AMode,
    pub n_set: Vec<BigInt>,
    /// Sweep this polynomial instead of `t^k`; `k_set` is then ignored and
    /// the degree plays the role of `k`.
    pub poly: Option<Poly>,
    /// Window limit for general polynomials.
    pub t_cap: BigInt,
    /// Cells with at most this many solutions get every pair witnessed.
    pub witness_limit: usize,
    pub algorithm: Algorithm,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Keep one row per cell in the report.
    pub keep_cells: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            k_set: vec![2],
            q_min: 1,
            q_max: 100,
            a_mode: AMode::Window,
            n_set: vec![BigInt::from(100)],
            poly: None,
            t_cap: BigInt::from(10_000_000),
            witness_limit: 64,
            algorithm: Algorithm::Auto,
            threads: None,
            keep_cells: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub k: u32,
    #[serde(with = "bigint_serde")]
    pub q: BigInt,
    #[serde(with = "bigint_serde")]
    pub a: BigInt,
    #[serde(rename = "N", with = "bigint_serde")]
    pub n: BigInt,
}

/// One CSV row: `k,q,a,N,count_t,count_values,bound,ratio_num,ratio_den`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellResult {
    pub k: u32,
    #[serde(with = "bigint_serde")]
    pub q: BigInt,
    #[serde(with = "bigint_serde")]
    pub a: BigInt,
    #[serde(rename = "N", with = "bigint_serde")]
    pub n: BigInt,
    #[serde(with = "bigint_serde")]
    pub count_t: BigInt,
    #[serde(with = "bigint_serde")]
    pub count_values: BigInt,
    #[serde(with = "bigint_serde")]
    pub bound: BigInt,
    /// `count_t`.
    #[serde(with = "bigint_serde")]
    pub ratio_num: BigInt,
    /// `d(q)^(k-1) * ceil(N^(1/k))`.
    #[serde(with = "bigint_serde")]
    pub ratio_den: BigInt,
}

impl CellResult {
    pub fn key(&self) -> CellKey {
        CellKey {
            k: self.k,
            q: self.q.clone(),
            a: self.a.clone(),
            n: self.n.clone(),
        }
    }
}

/// Largest `count_t / (d(q)^(k-1) ceil(N^(1/k)))` seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxRatio {
    pub cell: CellKey,
    #[serde(with = "bigint_serde")]
    pub num: BigInt,
    #[serde(with = "bigint_serde")]
    pub den: BigInt,
    /// `count_t / (d(q)^(k-1) N^(1/k))` with the real root, for display.
    pub value: f64,
}

/// Largest `count_values / N^(1/k)` seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxValuesRatio {
    pub cell: CellKey,
    #[serde(with = "bigint_serde")]
    pub count_values: BigInt,
    pub value: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStats {
    /// Cells small enough to witness every pair.
    pub cells: u64,
    pub pairs: u64,
    pub short_step: u64,
    pub small_quotient: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub cells_evaluated: u64,
    pub violations: u64,
    pub max_ratio: Option<MaxRatio>,
    pub max_values_ratio: Option<MaxValuesRatio>,
    pub witnesses: WitnessStats,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<CellResult>,
}

struct Outcome {
    cell: CellResult,
    witnesses: WitnessStats,
}

fn root_real(n: &BigInt, k: u32) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY).powf(1.0 / f64::from(k))
}

fn ratio_value(num: &BigInt, q_divisors_pow: &BigInt, n: &BigInt, k: u32) -> f64 {
    let den = q_divisors_pow.to_f64().unwrap_or(f64::INFINITY) * root_real(n, k);
    num.to_f64().unwrap_or(f64::INFINITY) / den
}

fn witness_pairs(p: &Poly, prog: &Progression, sols: &[Solution]) -> Result<WitnessStats> {
    let mut stats = WitnessStats {
        cells: 1,
        ..WitnessStats::default()
    };
    for s0 in sols {
        let quotient = p.difference_quotient(&s0.t)?;
        for s in sols {
            if s.t == s0.t {
                continue;
            }
            let w = build(
                p,
                prog,
                &s.t,
                &s0.t,
                s.i.clone(),
                s0.i.clone(),
                quotient.eval(&s.t),
            )?;
            stats.pairs += 1;
            match w.case {
                SplitCase::ShortStep => stats.short_step += 1,
                SplitCase::SmallQuotient => stats.small_quotient += 1,
            }
        }
    }
    Ok(stats)
}

fn evaluate(cfg: &SweepConfig, key: &CellKey) -> Result<Outcome> {
    let prog = Progression::new(key.a.clone(), key.q.clone(), key.n.clone())?;
    let (poly, report): (Poly, CountReport) = match &cfg.poly {
        Some(p) => (p.clone(), count_poly_in_ap(p, &prog, &cfg.t_cap, true)?),
        None => {
            let opts = CountOptions {
                algorithm: cfg.algorithm,
                ..CountOptions::default()
            };
            (
                Poly::monomial(key.k),
                count_powers_in_ap_with(key.k, &prog, &opts)?,
            )
        }
    };
    let params = BoundParams::new(key.k)?;
    let scale = params.scale(&key.q, &key.n)?;
    let bound = &params.constant * &scale;
    if report.count_t > bound {
        return Err(Error::BoundViolation(Box::new(Violation {
            k: key.k,
            q: key.q.clone(),
            a: key.a.clone(),
            n: key.n.clone(),
            count_t: report.count_t,
            bound,
        })));
    }
    let mut witnesses = WitnessStats::default();
    if report.count_t <= BigInt::from(cfg.witness_limit) {
        let sols = match report.solutions {
            Some(ref s) => s.clone(),
            None => {
                let opts = CountOptions {
                    algorithm: cfg.algorithm,
                    with_solutions: true,
                    ..CountOptions::default()
                };
                count_powers_in_ap_with(key.k, &prog, &opts)?
                    .solutions
                    .unwrap_or_default()
            }
        };
        witnesses = witness_pairs(&poly, &prog, &sols)?;
    }
    Ok(Outcome {
        cell: CellResult {
            k: key.k,
            q: key.q.clone(),
            a: key.a.clone(),
            n: key.n.clone(),
            ratio_num: report.count_t.clone(),
            count_t: report.count_t,
            count_values: report.count_values,
            bound,
            ratio_den: scale,
        },
        witnesses,
    })
}

fn grid(cfg: &SweepConfig) -> Result<Vec<CellKey>> {
    let mut ks: Vec<u32> = match &cfg.poly {
        Some(p) => {
            let d = p
                .degree()
                .filter(|&d| d >= 1)
                .ok_or(Error::ConstantPolynomial)?;
            vec![u32::try_from(d).map_err(|_| Error::domain("degree", "below 2^32", d))?]
        }
        None => cfg.k_set.clone(),
    };
    ks.sort_unstable();
    ks.dedup();
    let mut ns = cfg.n_set.clone();
    ns.sort();
    ns.dedup();
    if ks.is_empty() {
        return Err(Error::EmptyRange("k set"));
    }
    if ns.is_empty() {
        return Err(Error::EmptyRange("N set"));
    }
    if cfg.q_min < 1 || cfg.q_min > cfg.q_max {
        return Err(Error::EmptyRange("q range"));
    }
    if let Some(&k) = ks.first().filter(|&&k| k == 0) {
        return Err(Error::domain("k", "at least 1", k));
    }
    if let Some(n) = ns.first().filter(|n| n.sign() != num_bigint::Sign::Plus) {
        return Err(Error::domain("N", "at least 1", n.clone()));
    }
    let mut cells = Vec::new();
    for &k in &ks {
        for q in cfg.q_min..=cfg.q_max {
            for a in cfg.a_mode.offsets(q) {
                for n in &ns {
                    cells.push(CellKey {
                        k,
                        q: q.into(),
                        a: a.into(),
                        n: n.clone(),
                    });
                }
            }
        }
    }
    Ok(cells)
}

pub(crate) fn run_in_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::ThreadPool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Counts every cell of the grid, checks `count_t` against the bound, and
/// witnesses every solution pair in cells with at most `witness_limit`
/// solutions.
///
/// Cells are ordered by `(k, q, a, N)`. Results do not depend on the thread
/// count: the first failing cell in that order is reported, and maxima keep
/// the earliest cell on ties.
pub fn verify_bound_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let cells = grid(cfg)?;
    let outcomes: Vec<Result<Outcome>> = run_in_pool(cfg.threads, || {
        cells.par_iter().map(|key| evaluate(cfg, key)).collect()
    })?;

    let mut report = SweepReport {
        cells_evaluated: 0,
        violations: 0,
        max_ratio: None,
        max_values_ratio: None,
        witnesses: WitnessStats::default(),
        cells: Vec::new(),
    };
    for outcome in outcomes {
        let Outcome { cell, witnesses } = outcome?;
        report.cells_evaluated += 1;
        report.witnesses.cells += witnesses.cells;
        report.witnesses.pairs += witnesses.pairs;
        report.witnesses.short_step += witnesses.short_step;
        report.witnesses.small_quotient += witnesses.small_quotient;

        let better_ratio = match &report.max_ratio {
            None => true,
            Some(m) => {
                (&cell.ratio_num * &m.den).cmp(&(&m.num * &cell.ratio_den)) == Ordering::Greater
            }
        };
        if better_ratio {
            let dpow = &cell.ratio_den / crate::kernel::ikth_root_ceil(&cell.n, cell.k)?;
            report.max_ratio = Some(MaxRatio {
                cell: cell.key(),
                num: cell.ratio_num.clone(),
                den: cell.ratio_den.clone(),
                value: ratio_value(&cell.ratio_num, &dpow, &cell.n, cell.k),
            });
        }
        // count_values / N^(1/k), compared exactly via c1^k N2 vs c2^k N1
        // (exponents differ across k, so compare in f64 when they do).
        let better_values = match &report.max_values_ratio {
            None => true,
            Some(m) if m.cell.k == cell.k => {
                let lhs = num_traits::pow(cell.count_values.clone(), cell.k as usize) * &m.cell.n;
                let rhs = num_traits::pow(m.count_values.clone(), cell.k as usize) * &cell.n;
                lhs > rhs
            }
            Some(m) => {
                cell.count_values.to_f64().unwrap_or(f64::INFINITY) / root_real(&cell.n, cell.k)
                    > m.value
            }
        };
        if better_values {
            report.max_values_ratio = Some(MaxValuesRatio {
                cell: cell.key(),
                count_values: cell.count_values.clone(),
                value: cell.count_values.to_f64().unwrap_or(f64::INFINITY)
                    / root_real(&cell.n, cell.k),
            });
        }
        if cfg.keep_cells {
            report.cells.push(cell);
        }
    }
    Ok(report)
}

/// `floor(N^(1/k))`, the count of the progression `1, 2, ..., N`.
pub fn trivial_count(k: u32, n: &BigInt) -> Result<BigInt> {
    ikth_root_floor(n, k)
}
