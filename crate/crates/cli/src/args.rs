use ap_powers::parse_int;
use ap_powers::poly::Poly;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "ap-powers",
    version,
    about = "Exact counts of kth powers in arithmetic progressions"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Auto,
    Interval,
    Residue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AModeArg {
    Residues,
    Window,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count kth powers or polynomial values among a+q, ..., a+Nq.
    Count(CountArgs),
    /// Solve x^k = a modulo m.
    Roots(RootsArgs),
    /// Check the count bound on every cell of a grid.
    Verify(VerifyArgs),
    /// Divisor-splitting witness for a pair of solutions.
    Witness(WitnessArgs),
    /// Extremal and Rudin progression searches.
    #[command(subcommand)]
    Search(SearchCommand),
}

#[derive(Debug, Args)]
#[group(id = "exponent", required = true, multiple = false, args = ["k", "poly"])]
pub struct Target {
    /// Exponent k of the power t^k.
    #[arg(long, value_parser = parse_u32)]
    pub k: Option<u32>,
    /// Polynomial coefficients "c0,c1,...,cd", lowest degree first.
    #[arg(long, value_parser = parse_poly, allow_hyphen_values = true)]
    pub poly: Option<Poly>,
}

#[derive(Debug, Args)]
pub struct ProgressionArgs {
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    pub a: BigInt,
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    pub q: BigInt,
    #[arg(long = "N", value_parser = parse_big, allow_hyphen_values = true)]
    pub n: BigInt,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub target: Target,
    #[command(flatten)]
    pub prog: ProgressionArgs,
    /// List every solution (t, i).
    #[arg(long)]
    pub solutions: bool,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Auto)]
    pub algorithm: AlgorithmArg,
    /// Largest |t| scanned for a general polynomial.
    #[arg(long, value_parser = parse_big, default_value = "10000000")]
    pub t_cap: BigInt,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    pub a: BigInt,
    #[arg(long, value_parser = parse_u32)]
    pub k: u32,
    #[arg(long = "mod", value_parser = parse_big, allow_hyphen_values = true)]
    pub modulus: BigInt,
    /// Largest prime power p^e handled by lifting.
    #[arg(long, value_parser = parse_u64, default_value = "10000000")]
    pub prime_power_cap: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated exponents.
    #[arg(long, value_parser = parse_u32, value_delimiter = ',', required_unless_present = "poly")]
    pub k_set: Vec<u32>,
    /// Sweep this polynomial instead of t^k.
    #[arg(long, value_parser = parse_poly, allow_hyphen_values = true)]
    pub poly: Option<Poly>,
    #[arg(long, value_parser = parse_u64, default_value = "1")]
    pub q_min: u64,
    #[arg(long, value_parser = parse_u64)]
    pub q_max: u64,
    #[arg(long, value_enum, default_value_t = AModeArg::Window)]
    pub a_mode: AModeArg,
    /// Comma-separated progression lengths.
    #[arg(long = "N-set", value_parser = parse_big, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub n_set: Vec<BigInt>,
    #[arg(long, value_parser = parse_big, default_value = "10000000")]
    pub t_cap: BigInt,
    /// Witness every solution pair in cells with at most this many solutions.
    #[arg(long, value_parser = parse_usize, default_value = "64")]
    pub witness_limit: usize,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Auto)]
    pub algorithm: AlgorithmArg,
    /// Write one CSV row per cell to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Include every cell in the JSON result.
    #[arg(long)]
    pub cells: bool,
    /// Worker threads (default: all cores).
    #[arg(long, value_parser = parse_usize)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub target: Target,
    #[command(flatten)]
    pub prog: ProgressionArgs,
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    pub t: BigInt,
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    pub t0: BigInt,
}

#[derive(Debug, Subcommand)]
pub enum SearchCommand {
    /// Maximum count over steps q <= q-max and a window of offsets.
    Extremal(ExtremalArgs),
    /// Squares in {24n + 1 : 0 <= n < N}.
    Rudin(RudinArgs),
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[arg(long, value_parser = parse_u32)]
    pub k: u32,
    #[arg(long = "N", value_parser = parse_big, allow_hyphen_values = true)]
    pub n: BigInt,
    #[arg(long, value_parser = parse_u64)]
    pub q_max: u64,
    /// Offsets a = r + s q with 0 <= r < q and |s| <= a-window.
    #[arg(long, value_parser = parse_u64, default_value = "0")]
    pub a_window: u64,
    /// Refuse searches with more cells than this.
    #[arg(long, value_parser = parse_u128, default_value = "50000000")]
    pub cell_budget: u128,
    /// Also record every cell whose count reaches this value.
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    pub dump_threshold: Option<BigInt>,
    /// Write the dumped cells as CSV to this file.
    #[arg(long, requires = "dump_threshold")]
    pub csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Auto)]
    pub algorithm: AlgorithmArg,
    #[arg(long, value_parser = parse_usize)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RudinArgs {
    #[arg(long = "N", value_parser = parse_big, allow_hyphen_values = true)]
    pub n: BigInt,
}

fn parse_big(s: &str) -> Result<BigInt, String> {
    parse_int(s).map_err(|e| e.to_string())
}

fn parse_poly(s: &str) -> Result<Poly, String> {
    s.parse().map_err(|e: ap_powers::Error| e.to_string())
}

fn parse_fixed<T: TryFrom<BigInt>>(s: &str) -> Result<T, String> {
    let v = parse_big(s)?;
    T::try_from(v.clone()).map_err(|_| format!("{v} is out of range"))
}

fn parse_u32(s: &str) -> Result<u32, String> {
    parse_fixed(s)
}

fn parse_u64(s: &str) -> Result<u64, String> {
    parse_fixed(s)
}

fn parse_u128(s: &str) -> Result<u128, String> {
    parse_fixed(s)
}

fn parse_usize(s: &str) -> Result<usize, String> {
    parse_fixed(s)
}
