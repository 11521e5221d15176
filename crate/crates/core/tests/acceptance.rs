//! Acceptance criteria 1 to 8. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails. Every comparison is exact integer equality
//! or inequality; runtime limits are stated in each line.

use ap_powers::counting::{
    count_powers_in_ap, count_powers_in_ap_with, Algorithm, CountOptions, CountReport, Progression,
};
use ap_powers::kernel::is_kth_power;
use ap_powers::modroots::kth_roots_mod;
use ap_powers::poly::Poly;
use ap_powers::search::{extremal_search, rudin_count, SearchConfig};
use ap_powers::theorem::{extract_witness, theorem_bound, verify_bound_sweep, SweepConfig};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

const KS: [u32; 3] = [2, 3, 4];
const Q_MAX: i64 = 200;
const NS: [i64; 4] = [1, 10, 100, 1000];
const WITNESS_LIMIT: usize = 64;

type Outcome = Result<String, String>;

/// Name, check and optional runtime limit.
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every `(k, q, a, N)` cell of the criterion 1 grid.
fn grid() -> impl Iterator<Item = (u32, i64, i64, i64)> {
    KS.into_iter().flat_map(|k| {
        (1..=Q_MAX).flat_map(move |q| {
            (-q..=q).flat_map(move |a| NS.into_iter().map(move |n| (k, q, a, n)))
        })
    })
}

fn grid_size() -> u64 {
    (KS.len() * NS.len()) as u64 * (1..=Q_MAX as u64).map(|q| 2 * q + 1).sum::<u64>()
}

/// Number of integers `t` with `t^k = v` for each `v` in `[-r, r]`, found by
/// calling `is_kth_power` once per value.
struct PowerTable {
    radius: i64,
    roots: Vec<u8>,
}

impl PowerTable {
    fn new(k: u32, radius: i64) -> Self {
        let roots = (-radius..=radius)
            .map(|v| match is_kth_power(&BigInt::from(v), k) {
                Some(r) if k.is_multiple_of(2) && !r.is_zero() => 2,
                Some(_) => 1,
                None => 0,
            })
            .collect();
        PowerTable { radius, roots }
    }

    fn roots_of(&self, v: i64) -> u8 {
        self.roots[(v + self.radius) as usize]
    }
}

fn brute_force(table: &PowerTable, q: i64, a: i64, n: i64) -> (u64, u64) {
    let (mut count_t, mut count_values) = (0u64, 0u64);
    for i in 1..=n {
        let r = table.roots_of(a + i * q);
        count_t += u64::from(r);
        count_values += u64::from(r > 0);
    }
    (count_t, count_values)
}

fn with(algorithm: Algorithm) -> CountOptions {
    CountOptions {
        algorithm,
        with_solutions: true,
        ..CountOptions::default()
    }
}

fn criterion_1() -> Outcome {
    let radius = Q_MAX + NS[NS.len() - 1] * Q_MAX;
    let tables: Vec<PowerTable> = KS.iter().map(|&k| PowerTable::new(k, radius)).collect();
    let mut cells = 0u64;
    let mut solutions = 0u64;
    for (k, q, a, n) in grid() {
        let prog = Progression::from_i64(a, q, n).unwrap();
        let walk = count_powers_in_ap_with(k, &prog, &with(Algorithm::IntervalWalk))
            .map_err(|e| e.to_string())?;
        let stride = count_powers_in_ap_with(k, &prog, &with(Algorithm::ResidueStride))
            .map_err(|e| e.to_string())?;
        let cell = format!("k={k} q={q} a={a} N={n}");
        ensure(walk == stride, || {
            format!("{cell}: interval walk {walk:?} != residue stride {stride:?}")
        })?;
        let (bt, bv) = brute_force(&tables[(k - 2) as usize], q, a, n);
        ensure(
            walk.count_t == bt.into() && walk.count_values == bv.into(),
            || {
                format!(
                    "{cell}: engines give ({}, {}), brute force ({bt}, {bv})",
                    walk.count_t, walk.count_values
                )
            },
        )?;
        let sols = walk.solutions.as_ref().unwrap();
        ensure(BigInt::from(sols.len()) == walk.count_t, || {
            format!("{cell}: solution list length")
        })?;
        for s in sols {
            ensure(
                num_traits::pow(s.t.clone(), k as usize) == prog.term(&s.i),
                || format!("{cell}: t={} i={} is not a solution", s.t, s.i),
            )?;
        }
        cells += 1;
        solutions += bt;
    }
    ensure(cells == grid_size(), || {
        format!("visited {cells} cells, grid has {}", grid_size())
    })?;
    Ok(format!(
        "{cells} cells, {solutions} solutions; both engines and brute force agree exactly"
    ))
}

fn criterion_2() -> Outcome {
    let mut checked = 0u64;
    for m in 1..=2000u64 {
        for k in 2..=5u32 {
            let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); m as usize];
            for x in 0..m {
                let mut p = 1 % m;
                for _ in 0..k {
                    p = p * x % m;
                }
                buckets[p as usize].push(x);
            }
            let mb = BigInt::from(m);
            for (a, want) in buckets.iter().enumerate() {
                let got = kth_roots_mod(&BigInt::from(a), k, &mb).map_err(|e| e.to_string())?;
                let want: Vec<BigInt> = want.iter().map(|&x| BigInt::from(x)).collect();
                ensure(
                    got.residues() == want.as_slice() && got.modulus() == &mb,
                    || {
                        format!(
                            "m={m} k={k} a={a}: got {:?}, brute force {want:?}",
                            got.residues()
                        )
                    },
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} (m, k, a) triples match brute-force enumeration exactly"
    ))
}

fn divisor_count(q: i64) -> u64 {
    (1..=q).filter(|d| q % d == 0).count() as u64
}

fn ceil_root(n: i64, k: u32) -> u64 {
    let mut r = 0u64;
    while (r as u128).pow(k) < n as u128 {
        r += 1;
    }
    r
}

fn criterion_3() -> Outcome {
    let (mut cells, mut tight) = (0u64, 0u64);
    let mut worst = (0u64, 1u64, String::new());
    for (k, q, a, n) in grid() {
        let prog = Progression::from_i64(a, q, n).unwrap();
        let count_t = count_powers_in_ap(k, &prog, false)
            .map_err(|e| e.to_string())?
            .count_t;
        let scale = divisor_count(q).pow(k - 1) * ceil_root(n, k);
        let bound = u64::from(2 * k - 1) * scale;
        let library = theorem_bound(k, &q.into(), &n.into()).map_err(|e| e.to_string())?;
        ensure(library == bound.into(), || {
            format!("k={k} q={q} N={n}: library bound {library}, expected {bound}")
        })?;
        let c: u64 = count_t.try_into().unwrap();
        ensure(c <= bound, || {
            format!("VIOLATION k={k} q={q} a={a} N={n}: count_t={c} > bound={bound}")
        })?;
        if c == bound {
            tight += 1;
        }
        if u128::from(c) * u128::from(worst.1) > u128::from(worst.0) * u128::from(bound) {
            worst = (c, bound, format!("k={k} q={q} a={a} N={n}"));
        }
        cells += 1;
    }
    Ok(format!(
        "{cells} cells, count_t <= (2k-1) d(q)^(k-1) ceil(N^(1/k)) with no slack; max count_t/bound = {}/{} at {}; {tight} cells attain the bound",
        worst.0, worst.1, worst.2
    ))
}

fn criterion_4() -> Outcome {
    let (mut cells, mut pairs) = (0u64, 0u64);
    for (k, q, a, n) in grid() {
        let prog = Progression::from_i64(a, q, n).unwrap();
        let report = count_powers_in_ap(k, &prog, true).map_err(|e| e.to_string())?;
        let sols = report.solutions.unwrap();
        if sols.len() > WITNESS_LIMIT {
            continue;
        }
        cells += 1;
        let p = Poly::monomial(k);
        let (qb, nb) = (BigInt::from(q), BigInt::from(n));
        for s in &sols {
            for s0 in &sols {
                if s.t == s0.t {
                    continue;
                }
                let cell = format!("k={k} q={q} a={a} N={n} t={} t0={}", s.t, s0.t);
                let w =
                    extract_witness(&p, &prog, &s.t, &s0.t).map_err(|e| format!("{cell}: {e}"))?;
                let step = &s.t - &s0.t;
                let quotient = (num_traits::pow(s.t.clone(), k as usize)
                    - num_traits::pow(s0.t.clone(), k as usize))
                    / &step;
                let gap = (&s.i - &s0.i).abs();
                ensure(&w.q1 * &w.q2 == qb, || format!("{cell}: q1 q2 != q"))?;
                ensure(step.is_multiple_of(&w.q1), || {
                    format!("{cell}: q1 does not divide t - t0")
                })?;
                ensure(w.quotient_value == quotient, || {
                    format!("{cell}: Q(t) is {}, expected {quotient}", w.quotient_value)
                })?;
                ensure(quotient.is_multiple_of(&w.q2), || {
                    format!("{cell}: q2 does not divide Q(t)")
                })?;
                ensure(&w.n1 * &w.n2 == gap, || {
                    format!("{cell}: n1 n2 != |i - i0|")
                })?;
                ensure(gap < nb, || format!("{cell}: |i - i0| exceeds N - 1"))?;
                ensure(w.i == s.i && w.i0 == s0.i, || {
                    format!("{cell}: indices differ")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered solution pairs in {cells} cells; every witness satisfies q1 q2 = q, q1 | t-t0, q2 | Q(t), n1 n2 = |i-i0| <= N-1"))
}

fn criterion_5() -> Outcome {
    let mut checked = 0u64;
    for k in 2..=6u32 {
        let mut root = 0u64;
        for n in 1..=10_000i64 {
            while ((root + 1) as u128).pow(k) <= n as u128 {
                root += 1;
            }
            let prog = Progression::from_i64(0, 1, n).unwrap();
            let got = count_powers_in_ap(k, &prog, false)
                .map_err(|e| e.to_string())?
                .count_values;
            ensure(got == root.into(), || {
                format!("k={k} N={n}: count_values={got}, floor(N^(1/k))={root}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} (k, N) pairs: count_values = floor(N^(1/k)) exactly"
    ))
}

/// Counts `t >= 1` with `gcd(t, 6) = 1` and `t^2 <= 24 N - 23`.
fn rudin_oracle(n: u64) -> u64 {
    let limit = 24 * n - 23;
    let mut count = 0;
    let mut t = 1u64;
    while t * t <= limit {
        if t.gcd(&6) == 1 {
            count += 1;
        }
        t += 1;
    }
    count
}

fn criterion_6() -> Outcome {
    let five = rudin_count(&5.into())
        .map_err(|e| e.to_string())?
        .count_values;
    ensure(five == 3.into() && rudin_oracle(5) == 3, || {
        format!("N=5: library {five}, oracle {}", rudin_oracle(5))
    })?;
    let start = Instant::now();
    let million = rudin_count(&1_000_000.into())
        .map_err(|e| e.to_string())?
        .count_values;
    let elapsed = start.elapsed();
    let oracle = rudin_oracle(1_000_000);
    ensure(million == 1633.into() && oracle == 1633, || {
        format!("N=10^6: library {million}, oracle {oracle}")
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("N=10^6 took {elapsed:?}, limit 1s")
    })?;
    for n in (1..=3000u64).chain([12_345, 99_999, 250_000]) {
        let got = rudin_count(&n.into())
            .map_err(|e| e.to_string())?
            .count_values;
        ensure(got == rudin_oracle(n).into(), || {
            format!("N={n}: library {got}, oracle {}", rudin_oracle(n))
        })?;
    }
    Ok(format!("rudin_count(5) = 3, rudin_count(10^6) = 1633 in {} ms; oracle agrees for N <= 3000 and 3 larger N", elapsed.as_millis()))
}

fn criterion_7() -> Outcome {
    let mut checked = 0u64;
    for (k, q, a, n) in grid() {
        let base = count_powers_in_ap(k, &Progression::from_i64(a, q, n).unwrap(), false)
            .map_err(|e| e.to_string())?;
        for m in [2i64, 3] {
            let s = m.pow(k);
            let scaled: CountReport =
                count_powers_in_ap(k, &Progression::from_i64(s * a, s * q, n).unwrap(), false)
                    .map_err(|e| e.to_string())?;
            ensure(
                scaled.count_t == base.count_t && scaled.count_values == base.count_values,
                || {
                    format!(
                        "k={k} q={q} a={a} N={n} m={m}: ({}, {}) vs ({}, {})",
                        base.count_t, base.count_values, scaled.count_t, scaled.count_values
                    )
                },
            )?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} scaled cells (m = 2, 3): count_t and count_values unchanged exactly"
    ))
}

fn criterion_8() -> Outcome {
    let sweep = |threads| {
        let cfg = SweepConfig {
            k_set: vec![2, 3],
            q_max: 60,
            n_set: [10, 100, 1000].map(BigInt::from).to_vec(),
            threads: Some(threads),
            ..SweepConfig::default()
        };
        serde_json::to_string(&verify_bound_sweep(&cfg)?)
            .map_err(|e| ap_powers::Error::Parse(e.to_string()))
    };
    let search = |threads| {
        let mut cfg = SearchConfig::new(2, 100.into(), 60, 1);
        cfg.threads = Some(threads);
        cfg.dump_threshold = Some(12.into());
        serde_json::to_string(&extremal_search(&cfg)?)
            .map_err(|e| ap_powers::Error::Parse(e.to_string()))
    };
    let mut sizes = Vec::new();
    for (name, run) in [
        (
            "verify",
            &sweep as &dyn Fn(usize) -> ap_powers::Result<String>,
        ),
        ("search", &search),
    ] {
        let outputs: Vec<String> = [1, 2, 8]
            .into_iter()
            .map(run)
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(outputs[0] == outputs[1] && outputs[0] == outputs[2], || {
            format!("{name} output differs across 1, 2, 8 threads")
        })?;
        sizes.push(format!("{name} {} bytes", outputs[0].len()));
    }
    Ok(format!(
        "byte-identical JSON at 1, 2 and 8 threads ({})",
        sizes.join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "oracle equivalence, counting",
            criterion_1,
            Some(Duration::from_secs(300)),
        ),
        (
            "oracle equivalence, modular roots",
            criterion_2,
            Some(Duration::from_secs(600)),
        ),
        ("bound never violated", criterion_3, None),
        ("witness validity", criterion_4, None),
        ("lower-bound reproduction", criterion_5, None),
        ("Rudin progression counts", criterion_6, None),
        ("scaling symmetry", criterion_7, None),
        ("determinism under parallelism", criterion_8, None),
    ];
    let mut failed = 0;
    for (idx, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!(
                "took {:.1}s, limit {}s",
                elapsed.as_secs_f64(),
                l.as_secs()
            )),
            (o, _) => o,
        };
        let time = match limit {
            Some(l) => format!("{:.1}s of {}s", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.1}s", elapsed.as_secs_f64()),
        };
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{time}] {detail}", idx + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{time}] {why}", idx + 1);
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
