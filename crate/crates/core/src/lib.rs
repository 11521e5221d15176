pub mod bigint_serde;
pub mod counting;
pub mod error;
pub mod kernel;
pub mod modroots;
pub mod poly;
pub mod search;
pub mod theorem;

pub use error::{Error, Result, Violation};

use num_bigint::BigInt;

/// Parses a decimal integer: optional sign followed by ASCII digits only.
pub fn parse_int(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("{s:?} is not a decimal integer")));
    }
    s.parse()
        .map_err(|_| Error::Parse(format!("{s:?} is not a decimal integer")))
}
