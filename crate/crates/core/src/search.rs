//! Bounded extremal search for the largest count of kth powers over
//! progressions of a fixed length, and the `{24n + 1}` progression.

use crate::bigint_serde;
use crate::counting::{
    count_powers_in_ap, count_powers_in_ap_with, Algorithm, CountOptions, CountReport, Progression,
};
use crate::error::{Error, Result};
use crate::kernel::ikth_root_floor;
use crate::theorem::run_in_pool;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_CELL_BUDGET: u128 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub k: u32,
    pub n: BigInt,
    pub q_max: u64,
    /// Offsets are `a = r + s q` with `r` in `[0, q)` and `|s| <= a_window`.
    pub a_window: u64,
    pub cell_budget: u128,
    pub threads: Option<usize>,
    /// Also list every cell whose count reaches this value.
    pub dump_threshold: Option<BigInt>,
    pub algorithm: Algorithm,
}

impl SearchConfig {
    pub fn new(k: u32, n: BigInt, q_max: u64, a_window: u64) -> Self {
        SearchConfig {
            k,
            n,
            q_max,
            a_window,
            cell_budget: DEFAULT_CELL_BUDGET,
            threads: None,
            dump_threshold: None,
            algorithm: Algorithm::Auto,
        }
    }

    /// Number of `(q, a)` cells the search visits.
    pub fn cell_count(&self) -> u128 {
        let q = u128::from(self.q_max);
        q * (q + 1) / 2 * (2 * u128::from(self.a_window) + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SearchCell {
    #[serde(with = "bigint_serde")]
    pub q: BigInt,
    #[serde(with = "bigint_serde")]
    pub a: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpCell {
    #[serde(with = "bigint_serde")]
    pub q: BigInt,
    #[serde(with = "bigint_serde")]
    pub a: BigInt,
    #[serde(with = "bigint_serde")]
    pub count_values: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub q_max: u64,
    pub a_window: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub k: u32,
    #[serde(rename = "N", with = "bigint_serde")]
    pub n: BigInt,
    #[serde(with = "bigint_serde")]
    pub best_count_values: BigInt,
    /// Every cell attaining the maximum, sorted by `(q, a)`.
    pub best_cells: Vec<SearchCell>,
    pub search_bounds: SearchBounds,
    pub cells_evaluated: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dump: Option<Vec<DumpCell>>,
}

impl SearchRecord {
    /// Recomputes every listed cell and checks the trivial lower bound.
    pub fn verify(&self) -> Result<()> {
        if self.search_bounds.q_max >= 1 {
            let trivial = ikth_root_floor(&self.n, self.k)?;
            if self.best_count_values < trivial {
                return Err(Error::Invariant(format!(
                    "best count {} is below the trivial progression's {trivial}",
                    self.best_count_values
                )));
            }
        }
        for cell in &self.best_cells {
            let prog = Progression::new(cell.a.clone(), cell.q.clone(), self.n.clone())?;
            let got = count_powers_in_ap(self.k, &prog, false)?.count_values;
            if got != self.best_count_values {
                return Err(Error::Invariant(format!(
                    "cell q={} a={} has count {got}, record says {}",
                    cell.q, cell.a, self.best_count_values
                )));
            }
        }
        Ok(())
    }

    /// Parses a serialized record and verifies it.
    pub fn from_json(s: &str) -> Result<Self> {
        let rec: SearchRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        rec.verify()?;
        Ok(rec)
    }
}

fn scan_step(cfg: &SearchConfig, q: u64) -> Result<Vec<(BigInt, BigInt)>> {
    let opts = CountOptions {
        algorithm: cfg.algorithm,
        ..CountOptions::default()
    };
    let w = i128::from(cfg.a_window);
    let qi = i128::from(q);
    let mut out = Vec::with_capacity(q as usize * (2 * cfg.a_window as usize + 1));
    for s in -w..=w {
        for r in 0..qi {
            let a = BigInt::from(r + s * qi);
            let prog = Progression::new(a.clone(), q.into(), cfg.n.clone())?;
            out.push((
                a,
                count_powers_in_ap_with(cfg.k, &prog, &opts)?.count_values,
            ));
        }
    }
    Ok(out)
}

/// Exhaustive maximum of `count_values` over `q` in `[1, q_max]` and the
/// offsets described by `a_window`.
pub fn extremal_search(cfg: &SearchConfig) -> Result<SearchRecord> {
    if cfg.k < 2 {
        return Err(Error::domain("k", "at least 2", cfg.k));
    }
    if cfg.n.sign() != num_bigint::Sign::Plus {
        return Err(Error::domain("N", "at least 1", cfg.n.clone()));
    }
    if cfg.q_max < 1 {
        return Err(Error::EmptyRange("q range"));
    }
    let cells = cfg.cell_count();
    if cells > cfg.cell_budget {
        return Err(Error::BudgetExceeded {
            cells,
            budget: cfg.cell_budget,
        });
    }
    let per_q: Vec<Result<Vec<(BigInt, BigInt)>>> = run_in_pool(cfg.threads, || {
        (1..=cfg.q_max)
            .into_par_iter()
            .map(|q| scan_step(cfg, q))
            .collect()
    })?;

    let mut best = BigInt::from(-1);
    let mut best_cells = Vec::new();
    let mut dump = cfg.dump_threshold.as_ref().map(|_| Vec::new());
    let mut evaluated = 0u64;
    for (q, row) in (1..=cfg.q_max).zip(per_q) {
        for (a, count) in row? {
            evaluated += 1;
            if let (Some(d), Some(th)) = (dump.as_mut(), cfg.dump_threshold.as_ref()) {
                if &count >= th {
                    d.push(DumpCell {
                        q: q.into(),
                        a: a.clone(),
                        count_values: count.clone(),
                    });
                }
            }
            if count > best {
                best = count;
                best_cells.clear();
                best_cells.push(SearchCell { q: q.into(), a });
            } else if count == best {
                best_cells.push(SearchCell { q: q.into(), a });
            }
        }
    }
    best_cells.sort();
    Ok(SearchRecord {
        k: cfg.k,
        n: cfg.n.clone(),
        best_count_values: best,
        best_cells,
        search_bounds: SearchBounds {
            q_max: cfg.q_max,
            a_window: cfg.a_window,
        },
        cells_evaluated: evaluated,
        dump,
    })
}

/// Squares in `{24n + 1 : 0 <= n <= N - 1}`.
pub fn rudin_count(n: &BigInt) -> Result<CountReport> {
    let prog = Progression::rudin(n.clone())?;
    let opts = CountOptions {
        algorithm: Algorithm::ResidueStride,
        ..CountOptions::default()
    };
    count_powers_in_ap_with(2, &prog, &opts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RudinComparison {
    #[serde(with = "bigint_serde")]
    pub rudin: BigInt,
    #[serde(with = "bigint_serde")]
    pub trivial: BigInt,
    pub ratio: f64,
}

/// Squares in `{24n + 1}` against `floor(sqrt(N))`, the count for `1..=N`.
pub fn rudin_vs_trivial(n: &BigInt) -> Result<RudinComparison> {
    let rudin = rudin_count(n)?.count_values;
    let trivial = ikth_root_floor(n, 2)?;
    let ratio = rudin.to_f64().unwrap_or(f64::NAN) / trivial.to_f64().unwrap_or(f64::NAN);
    Ok(RudinComparison {
        rudin,
        trivial,
        ratio,
    })
}
