//! Dyadic parameter tuples and the derived quantities the counting
//! experiments share, plus two small min-inequality helpers.
//!
//! All logarithms are natural. For a range endpoint `x`, a moment exponent
//! `gamma`, and a dyadic gap scale `H`, the derived quantities are
//!
//! - `H0 = (log x / log log x)^{1/(gamma+2)}` and `H1 = C0·x^{1/5}·log x`,
//!   the gap scales below/above which other arguments take over;
//! - `P0 = ¼·H·log H` and `P1 = H^gamma·log H`, the prime-block range;
//! - `D = 2^9·(gamma·log H)^{3/2}` and `D' = 2D²`, the gcd caps of the
//!   sextuple count;
//! - the bridge limit on `H` and three thresholds on `P` that decide which
//!   bound applies (see [`crate::fractional::regime_table`]).

use crate::{domain, Result};
use serde::Serialize;

/// The tuple `(x, gamma, C0, H, P, K, L, v)` with its derived quantities.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DyadicParams {
    pub x: u64,
    pub gamma: f64,
    pub c0: f64,
    pub h: u64,
    pub p: u64,
    pub k: u64,
    pub l: u64,
    pub v: u64,
    pub h0: f64,
    pub h1: f64,
    pub p0: f64,
    pub p1: f64,
    pub d: f64,
    pub d_prime: f64,
    /// Largest `H` for which the bridge condition
    /// `H ≤ x^{3/(8γ−13)} / log^{22} x` holds.
    pub h_bridge_limit: f64,
    /// The three `P` thresholds `H^{15/8}/(x^{1/8} log² H)`,
    /// `H^{5/4}/log² H`, `H^{3/4} x^{1/4}/log² H`; the window bound on
    /// `T(H,P)` forces a small count whenever `P` is at or below all three.
    pub p_thresholds: [f64; 3],
}

/// Populates a [`DyadicParams`] for `(x, gamma, C0, H)` with `P = K = L =
/// v = 1`; use [`DyadicParams::with_dyadics`] to fill the rest.
pub fn derive_params(x: u64, gamma: f64, c0: f64, h: u64) -> Result<DyadicParams> {
    if x < 16 {
        return Err(domain("derive_params: x must be >= 16"));
    }
    if h < 4 {
        return Err(domain("derive_params: H must be >= 4"));
    }
    if !(gamma >= 3.0) {
        return Err(domain("derive_params: gamma must be >= 3"));
    }
    if !(c0 > 0.0) {
        return Err(domain("derive_params: C0 must be > 0"));
    }
    let xf = x as f64;
    let hf = h as f64;
    let log_x = xf.ln();
    let log_h = hf.ln();
    let h0 = (log_x / log_x.ln()).powf(1.0 / (gamma + 2.0));
    let h1 = c0 * xf.powf(0.2) * log_x;
    let p0 = 0.25 * hf * log_h;
    let p1 = hf.powf(gamma) * log_h;
    let d = 512.0 * (gamma * log_h).powf(1.5);
    let d_prime = 2.0 * d * d;
    let h_bridge_limit = xf.powf(3.0 / (8.0 * gamma - 13.0)) / log_x.powi(22);
    let p_thresholds = p_thresholds(x, h);
    Ok(DyadicParams {
        x,
        gamma,
        c0,
        h,
        p: 1,
        k: 1,
        l: 1,
        v: 1,
        h0,
        h1,
        p0,
        p1,
        d,
        d_prime,
        h_bridge_limit,
        p_thresholds,
    })
}

/// The three `P` thresholds for the window-count bound at scale `(x, H)`.
pub fn p_thresholds(x: u64, h: u64) -> [f64; 3] {
    let xf = x as f64;
    let hf = h as f64;
    let log_h2 = hf.ln().powi(2);
    [
        hf.powf(15.0 / 8.0) / (xf.powf(0.125) * log_h2),
        hf.powf(1.25) / log_h2,
        hf.powf(0.75) * xf.powf(0.25) / log_h2,
    ]
}

impl DyadicParams {
    pub fn with_dyadics(mut self, p: u64, k: u64, l: u64, v: u64) -> DyadicParams {
        self.p = p;
        self.k = k;
        self.l = l;
        self.v = v;
        self
    }
}

/// Powers of two inside `[lo, hi]`, starting no lower than 2. The upper
/// endpoint rounds down into the grid; the lower endpoint rounds up so the
/// grid never leaves the interval.
pub fn dyadic_range(lo: f64, hi: f64) -> Vec<u64> {
    if !(hi >= 2.0) || hi < lo {
        return Vec::new();
    }
    let mut k_lo = if lo <= 2.0 { 1 } else { lo.log2().ceil() as u32 };
    // Guard against log2 landing a hair above an exact power.
    if k_lo > 1 && (1u64 << (k_lo - 1)) as f64 >= lo {
        k_lo -= 1;
    }
    let k_hi = hi.log2().floor() as u32;
    (k_lo.max(1)..=k_hi.min(62))
        .map(|k| 1u64 << k)
        .filter(|&p| p as f64 >= lo)
        .collect()
}

/// Splits `min(a, b+c)` as `(min(a,b), min(a,c))`; the parts always sum to
/// at least the whole.
pub fn min_split(a: f64, b: f64, c: f64) -> Result<(f64, f64)> {
    if !(a >= 0.0 && b >= 0.0 && c >= 0.0) {
        return Err(domain("min_split: inputs must be nonnegative"));
    }
    Ok((a.min(b), a.min(c)))
}

/// The weighted geometric mean `a^alpha · b^(1−alpha)`, an upper bound for
/// `min(a, b)`.
pub fn min_interpolate(a: f64, b: f64, alpha: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain("min_interpolate: a and b must be positive"));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(domain("min_interpolate: alpha must lie in [0, 1]"));
    }
    // Exact in the cases where rounding could otherwise dip below min(a, b).
    if a == b || alpha == 1.0 {
        return Ok(a);
    }
    if alpha == 0.0 {
        return Ok(b);
    }
    Ok(a.powf(alpha) * b.powf(1.0 - alpha))
}
