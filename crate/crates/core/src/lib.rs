//! Squarefree numbers, the gaps between them, and the counting machinery
//! used to study gap moments.
//!
//! The crate has five building blocks:
//!
//! - [`sieve`]: a segmented squarefree sieve with an independent
//!   trial-division oracle and a [`GapRecord`](sieve::GapRecord) stream over
//!   arbitrary ranges.
//! - [`stats`]: gap histograms, compensated moment sums, and empirical
//!   estimates of the per-gap densities and the moment constant.
//! - [`params`]: the dyadic parameter tuples (`H`, `P`, `K`, `L`, ...), their
//!   derived quantities, and two small min-inequality helpers.
//! - [`window_counts`]: exact counts of integers of the form `p²q` falling in
//!   short windows — the quantities `F`, `T`, the sextuple count `S`, and two
//!   four-variable systems — each paired with an evaluated upper-bound
//!   formula.
//! - [`rational_points`] and [`fractional`]: counts of rational points close
//!   to the curves `√(k+u)` and of integers `m` with `n/m²` near an integer,
//!   plus the regime table that decides which bound applies for a given
//!   gap-length scale.
//!
//! Counting functions come in pairs: an optimized enumeration in the library
//! and a naive oracle in the test suite, checked for exact agreement. Bound
//! formulas are never asserted against counts; instead a
//! [`CountReport`] carries the exact count, the evaluated right-hand side,
//! and their ratio (the "fitted constant"), which stands in for the
//! inequality's unspecified constant.

pub mod fractional;
pub mod params;
pub mod rational_points;
pub mod sieve;
pub mod stats;
pub mod window_counts;

// The guide's chapters double as doctests: every Rust snippet in book/
// compiles and runs under `cargo test --doc`, so the book cannot drift
// from the code it documents.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/sieving.md")]
    mod sieving {}
    #[doc = include_str!("../../../book/src/gap-statistics.md")]
    mod gap_statistics {}
    #[doc = include_str!("../../../book/src/window-counts.md")]
    mod window_counts {}
    #[doc = include_str!("../../../book/src/rational-points.md")]
    mod rational_points {}
    #[doc = include_str!("../../../book/src/fractional-parts.md")]
    mod fractional_parts {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

use serde::Serialize;

/// Errors reported by the fallible operations in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument was outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    /// A serialized segment bitmap could not be decoded.
    #[error("malformed segment dump: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// Outcome of one counting experiment: the exact count, the evaluated
/// right-hand side of the matching upper bound, and their ratio.
///
/// `fitted_constant` is the empirical stand-in for the bound's unspecified
/// constant: the inequality `exact ≤ c · bound_value` holds with
/// `c = fitted_constant`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountReport {
    pub exact: u64,
    pub bound_value: f64,
    pub fitted_constant: f64,
}

impl CountReport {
    /// Pairs a count with an evaluated bound. A degenerate zero bound yields
    /// a fitted constant of `0` (when the count is also zero) or `+inf`.
    pub fn new(exact: u64, bound_value: f64) -> Self {
        let fitted_constant = if bound_value > 0.0 {
            exact as f64 / bound_value
        } else if exact == 0 {
            0.0
        } else {
            f64::INFINITY
        };
        CountReport {
            exact,
            bound_value,
            fitted_constant,
        }
    }
}

/// Greatest common divisor by Euclid's algorithm; `gcd(0, n) = n`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Integer square root: the largest `r` with `r·r ≤ n`.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while (r as u128) * (r as u128) > n as u128 {
        r -= 1;
    }
    while ((r + 1) as u128) * ((r + 1) as u128) <= n as u128 {
        r += 1;
    }
    r
}
