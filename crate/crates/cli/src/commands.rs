use crate::args::{
    AModeArg, AlgorithmArg, Command, CountArgs, ExtremalArgs, RootsArgs, RudinArgs, SearchCommand,
    Target, VerifyArgs, WitnessArgs,
};
use ap_powers::counting::{
    count_poly_in_ap, count_powers_in_ap_with, Algorithm, CountOptions, CountReport, Progression,
};
use ap_powers::modroots::{kth_roots_mod_with, RootOptions};
use ap_powers::poly::Poly;
use ap_powers::search::{extremal_search, rudin_count, rudin_vs_trivial, SearchConfig};
use ap_powers::theorem::{extract_witness, verify_bound_sweep, AMode, CellResult, SweepConfig};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ap_powers::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_internal() => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// A command's payload in each output format.
pub struct Output {
    pub command: &'static str,
    pub params: Value,
    pub result: Value,
    pub csv: String,
    pub text: String,
}

/// Result payload of `search rudin`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RudinResult {
    pub report: CountReport,
    pub comparison: ap_powers::search::RudinComparison,
}

pub fn run(command: &Command) -> Result<Output> {
    match command {
        Command::Count(a) => count(a),
        Command::Roots(a) => roots(a),
        Command::Verify(a) => verify(a),
        Command::Witness(a) => witness(a),
        Command::Search(SearchCommand::Extremal(a)) => extremal(a),
        Command::Search(SearchCommand::Rudin(a)) => rudin(a),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload types serialize without failure")
}

fn algorithm(a: AlgorithmArg) -> Algorithm {
    match a {
        AlgorithmArg::Auto => Algorithm::Auto,
        AlgorithmArg::Interval => Algorithm::IntervalWalk,
        AlgorithmArg::Residue => Algorithm::ResidueStride,
    }
}

fn target_params(t: &Target) -> Value {
    match (&t.k, &t.poly) {
        (Some(k), _) => json!({ "k": k }),
        (None, Some(p)) => json!({ "poly": p }),
        (None, None) => unreachable!("clap requires --k or --poly"),
    }
}

fn target_poly(t: &Target) -> Poly {
    match (&t.k, &t.poly) {
        (Some(k), _) => Poly::monomial(*k),
        (None, Some(p)) => p.clone(),
        (None, None) => unreachable!("clap requires --k or --poly"),
    }
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn csv_string<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn count(args: &CountArgs) -> Result<Output> {
    let prog = Progression::new(
        args.prog.a.clone(),
        args.prog.q.clone(),
        args.prog.n.clone(),
    )?;
    let report = match (&args.target.k, &args.target.poly) {
        (Some(k), _) => {
            let opts = CountOptions {
                algorithm: algorithm(args.algorithm),
                with_solutions: args.solutions,
                ..CountOptions::default()
            };
            count_powers_in_ap_with(*k, &prog, &opts)?
        }
        _ => count_poly_in_ap(
            &target_poly(&args.target),
            &prog,
            &args.t_cap,
            args.solutions,
        )?,
    };
    let mut params = merge(target_params(&args.target), to_value(&prog));
    params = merge(
        params,
        json!({ "solutions": args.solutions, "algorithm": to_value(&algorithm(args.algorithm)) }),
    );
    if args.target.poly.is_some() {
        params = merge(params, json!({ "t_cap": args.t_cap.to_string() }));
    }
    let csv = match &report.solutions {
        Some(sols) => csv_string(
            &["t", "i"],
            sols.iter().map(|s| [s.t.to_string(), s.i.to_string()]),
        )?,
        None => csv_string(
            &["count_t", "count_values"],
            [[report.count_t.to_string(), report.count_values.to_string()]],
        )?,
    };
    let mut text = format!(
        "count_t = {}\ncount_values = {}\n",
        report.count_t, report.count_values
    );
    for s in report.solutions.iter().flatten() {
        let _ = writeln!(
            text,
            "t = {}, i = {}, value = {}",
            s.t,
            s.i,
            prog.term(&s.i)
        );
    }
    Ok(Output {
        command: "count",
        params,
        result: to_value(&report),
        csv,
        text,
    })
}

fn roots(args: &RootsArgs) -> Result<Output> {
    let opts = RootOptions {
        prime_power_cap: args.prime_power_cap,
    };
    let set = kth_roots_mod_with(&args.a, args.k, &args.modulus, &opts)?;
    let params = json!({
        "a": args.a.to_string(),
        "k": args.k,
        "mod": args.modulus.to_string(),
        "prime_power_cap": args.prime_power_cap,
    });
    let m = set.modulus().to_string();
    let csv = csv_string(
        &["modulus", "residue"],
        set.residues().iter().map(|r| [m.clone(), r.to_string()]),
    )?;
    let list: Vec<String> = set.residues().iter().map(ToString::to_string).collect();
    let text = format!(
        "x^{} = {} (mod {}): {} residues\n{}\n",
        args.k,
        args.a,
        m,
        set.len(),
        list.join(" ")
    );
    Ok(Output {
        command: "roots",
        params,
        result: to_value(&set),
        csv,
        text,
    })
}

pub const CELL_COLUMNS: [&str; 9] = [
    "k",
    "q",
    "a",
    "N",
    "count_t",
    "count_values",
    "bound",
    "ratio_num",
    "ratio_den",
];

fn cell_row(c: &CellResult) -> [String; 9] {
    [
        c.k.to_string(),
        c.q.to_string(),
        c.a.to_string(),
        c.n.to_string(),
        c.count_t.to_string(),
        c.count_values.to_string(),
        c.bound.to_string(),
        c.ratio_num.to_string(),
        c.ratio_den.to_string(),
    ]
}

fn verify(args: &VerifyArgs) -> Result<Output> {
    let a_mode = match args.a_mode {
        AModeArg::Residues => AMode::Residues,
        AModeArg::Window => AMode::Window,
    };
    let cfg = SweepConfig {
        k_set: args.k_set.clone(),
        q_min: args.q_min,
        q_max: args.q_max,
        a_mode,
        n_set: args.n_set.clone(),
        poly: args.poly.clone(),
        t_cap: args.t_cap.clone(),
        witness_limit: args.witness_limit,
        algorithm: algorithm(args.algorithm),
        threads: args.threads,
        keep_cells: true,
    };
    let mut report = verify_bound_sweep(&cfg)?;
    let csv = csv_string(&CELL_COLUMNS, report.cells.iter().map(cell_row))?;
    if let Some(path) = &args.csv {
        write_file(path, &csv)?;
    }
    let cells = std::mem::take(&mut report.cells);
    if args.cells {
        report.cells = cells;
    }
    let mut params = json!({
        "k_set": args.k_set,
        "q_min": args.q_min,
        "q_max": args.q_max,
        "a_mode": to_value(&a_mode),
        "N_set": args.n_set.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "witness_limit": args.witness_limit,
        "algorithm": to_value(&cfg.algorithm),
    });
    if let Some(p) = &args.poly {
        params = merge(
            params,
            json!({ "poly": p, "t_cap": args.t_cap.to_string() }),
        );
    }
    if let Some(path) = &args.csv {
        params = merge(params, json!({ "csv": path.display().to_string() }));
    }
    let mut text = format!(
        "cells evaluated: {}\nviolations: {}\nwitnessed pairs: {} ({} short-step, {} small-quotient) in {} cells\n",
        report.cells_evaluated,
        report.violations,
        report.witnesses.pairs,
        report.witnesses.short_step,
        report.witnesses.small_quotient,
        report.witnesses.cells
    );
    if let Some(m) = &report.max_ratio {
        let _ = writeln!(
            text,
            "max count_t / (d(q)^(k-1) ceil(N^(1/k))): {}/{} at k={} q={} a={} N={}",
            m.num, m.den, m.cell.k, m.cell.q, m.cell.a, m.cell.n
        );
    }
    if let Some(m) = &report.max_values_ratio {
        let _ = writeln!(
            text,
            "max count_values / N^(1/k): {:.6} at k={} q={} a={} N={}",
            m.value, m.cell.k, m.cell.q, m.cell.a, m.cell.n
        );
    }
    Ok(Output {
        command: "verify",
        params,
        result: to_value(&report),
        csv,
        text,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub witness: ap_powers::theorem::Witness,
    pub checks: ap_powers::theorem::WitnessChecks,
}

fn witness(args: &WitnessArgs) -> Result<Output> {
    let prog = Progression::new(
        args.prog.a.clone(),
        args.prog.q.clone(),
        args.prog.n.clone(),
    )?;
    let poly = target_poly(&args.target);
    let w = extract_witness(&poly, &prog, &args.t, &args.t0)?;
    let checks = w.checks(&poly, &prog);
    let params = merge(
        merge(target_params(&args.target), to_value(&prog)),
        json!({ "t": args.t.to_string(), "t0": args.t0.to_string() }),
    );
    let result = WitnessResult { witness: w, checks };
    let w = &result.witness;
    let case = match to_value(&w.case) {
        Value::String(s) => s,
        other => other.to_string(),
    };
    let csv = csv_string(
        &[
            "t",
            "t0",
            "i",
            "i0",
            "q1",
            "q2",
            "n1",
            "n2",
            "quotient_value",
            "case",
            "all_checks",
        ],
        [[
            w.t.to_string(),
            w.t0.to_string(),
            w.i.to_string(),
            w.i0.to_string(),
            w.q1.to_string(),
            w.q2.to_string(),
            w.n1.to_string(),
            w.n2.to_string(),
            w.quotient_value.to_string(),
            case.clone(),
            checks.all().to_string(),
        ]],
    )?;
    let text = format!(
        "t = {}, t0 = {} (indices {}, {})\nq1 = {}, q2 = {}\nn1 = {}, n2 = {}\nQ(t) = {}\ncase: {}\nall checks hold: {}\n",
        w.t,
        w.t0,
        w.i,
        w.i0,
        w.q1,
        w.q2,
        w.n1,
        w.n2,
        w.quotient_value,
        case,
        checks.all()
    );
    Ok(Output {
        command: "witness",
        params,
        result: to_value(&result),
        csv,
        text,
    })
}

fn extremal(args: &ExtremalArgs) -> Result<Output> {
    let cfg = SearchConfig {
        k: args.k,
        n: args.n.clone(),
        q_max: args.q_max,
        a_window: args.a_window,
        cell_budget: args.cell_budget,
        threads: args.threads,
        dump_threshold: args.dump_threshold.clone(),
        algorithm: algorithm(args.algorithm),
    };
    let record = extremal_search(&cfg)?;
    if let (Some(path), Some(dump)) = (&args.csv, &record.dump) {
        let rows = dump
            .iter()
            .map(|c| [c.q.to_string(), c.a.to_string(), c.count_values.to_string()]);
        write_file(path, &csv_string(&["q", "a", "count_values"], rows)?)?;
    }
    let mut params = json!({
        "k": args.k,
        "N": args.n.to_string(),
        "q_max": args.q_max,
        "a_window": args.a_window,
        "cell_budget": args.cell_budget.to_string(),
        "algorithm": to_value(&cfg.algorithm),
    });
    if let Some(th) = &args.dump_threshold {
        params = merge(params, json!({ "dump_threshold": th.to_string() }));
    }
    if let Some(path) = &args.csv {
        params = merge(params, json!({ "csv": path.display().to_string() }));
    }
    let best = record.best_count_values.to_string();
    let csv = csv_string(
        &["q", "a", "count_values"],
        record
            .best_cells
            .iter()
            .map(|c| [c.q.to_string(), c.a.to_string(), best.clone()]),
    )?;
    let mut text = format!(
        "k = {}, N = {}: best count {} over {} cells\n",
        record.k, record.n, record.best_count_values, record.cells_evaluated
    );
    for c in &record.best_cells {
        let _ = writeln!(text, "q = {}, a = {}", c.q, c.a);
    }
    Ok(Output {
        command: "search extremal",
        params,
        result: to_value(&record),
        csv,
        text,
    })
}

fn rudin(args: &RudinArgs) -> Result<Output> {
    let report = rudin_count(&args.n)?;
    let comparison = rudin_vs_trivial(&args.n)?;
    let csv = csv_string(
        &["N", "count_t", "count_values", "trivial", "ratio"],
        [[
            args.n.to_string(),
            report.count_t.to_string(),
            report.count_values.to_string(),
            comparison.trivial.to_string(),
            comparison.ratio.to_string(),
        ]],
    )?;
    let text = format!(
        "squares among 24n+1, 0 <= n < {}: {}\nfloor(sqrt(N)) = {}\nratio = {}\n",
        args.n, report.count_values, comparison.trivial, comparison.ratio
    );
    Ok(Output {
        command: "search rudin",
        params: json!({ "N": args.n.to_string() }),
        result: to_value(&RudinResult { report, comparison }),
        csv,
        text,
    })
}
