//! Exact integer primitives: factorization, divisors, kth roots, perfect powers.

mod factor;
mod prime;
mod roots;

pub use factor::{
    divisor_count, divisor_pairs, divisors, factorize, PrimeFactorization, PrimePower,
    TRIAL_DIVISION_LIMIT,
};
pub use prime::{is_prime, is_prime_u64};
pub use roots::{ikth_root_ceil, ikth_root_floor, is_kth_power, root_floor_u128, root_floor_u64};

pub(crate) use factor::factorize_u64;
pub(crate) use prime::{mul_mod, pow_mod};
pub(crate) use roots::{signed_root_ceil, signed_root_floor};
