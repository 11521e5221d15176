//! The bound `count_t <= C_k d(q)^(k-1) ceil(N^(1/k))`: explicit constant,
//! witnesses for its inductive proof, and exhaustive sweeps.

mod bound;
mod sweep;
mod witness;

pub use bound::{bound_constant, theorem_bound, BoundParams};
pub use sweep::{
    trivial_count, verify_bound_sweep, AMode, CellKey, CellResult, MaxRatio, MaxValuesRatio,
    SweepConfig, SweepReport, WitnessStats,
};
pub use witness::{extract_witness, SplitCase, Witness, WitnessChecks};

pub(crate) use sweep::run_in_pool;
