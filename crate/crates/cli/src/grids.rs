//! The prescribed experiment grids behind the bound-fit checks.
//!
//! Every grid comes in two resolutions: the base grid steps through powers
//! of two (dyadic), and the refined grid doubles the resolution by
//! inserting the rounded half-steps `⌊2^{k+1/2}⌉`. Refined grids are strict
//! supersets of their base grids, so a refined maximum can only grow; the
//! stability checks assert it grows by no more than 20%.

use sqg_core::fractional::FractionalQuery;
use sqg_core::params::dyadic_range;
use sqg_core::rational_points::{ClosePointQuery, CurveSpec};

/// Powers of two inside `[lo, hi]`; with `refined`, the rounded half-steps
/// `⌊2^k·√2⌉` inside the same interval join them.
pub fn geometric_steps(lo: f64, hi: f64, refined: bool) -> Vec<u64> {
    let base = dyadic_range(lo, hi);
    if !refined {
        return base;
    }
    let mut out = base;
    let mut p = 2u64;
    while (p as f64) <= hi {
        let mid = ((p as f64) * std::f64::consts::SQRT_2).round() as u64;
        if (mid as f64) >= lo && (mid as f64) <= hi {
            out.push(mid);
        }
        p *= 2;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Gamma fixed for the window-count grid's `P` ceiling.
pub const T_GRID_GAMMA: f64 = 3.5;

/// Window-count grid: `x ∈ {10^6, 10^7}`, dyadic `H ≤ x^{1/5}·log x`,
/// dyadic `P ∈ [P0(H), P1(H)]` truncated to `P ≤ √x`.
pub fn t_window_grid(refined: bool) -> Vec<(u64, u64, u64)> {
    let mut grid = Vec::new();
    for x in [1_000_000u64, 10_000_000] {
        let xf = x as f64;
        let h_hi = xf.powf(0.2) * xf.ln();
        for h in geometric_steps(4.0, h_hi, refined) {
            let hf = h as f64;
            let p0 = 0.25 * hf * hf.ln();
            let p1 = hf.powf(T_GRID_GAMMA) * hf.ln();
            let p_hi = p1.min(xf.sqrt());
            for p in geometric_steps(p0.max(2.0), p_hi, refined) {
                grid.push((x, h, p));
            }
        }
    }
    grid
}

/// Near-equality grid: two scales, dyadic `H` and `P`, three `(K, L)`
/// levels. Resolution doubling applies to the `H` and `P` axes.
pub fn near_equal_grid(refined: bool) -> Vec<(u64, u64, u64, u64, u64)> {
    let mut grid = Vec::new();
    for x in [100_000u64, 1_000_000] {
        for h in geometric_steps(16.0, 256.0, refined) {
            for &(k, l) in &[(1u64, 1u64), (2, 2), (4, 4)] {
                for p in geometric_steps(4.0, 32.0, refined) {
                    if h / (k * l) >= 1 {
                        grid.push((x, h, k, l, p));
                    }
                }
            }
        }
    }
    grid
}

const CLOSE_DELTAS_BASE: [f64; 4] = [0.05, 0.1, 0.2, 0.4];
const CLOSE_DELTAS_HALF: [f64; 3] = [0.070710678118654752, 0.14142135623730951, 0.2828427124746190];

/// Close-point grid: all three curves, dyadic `M` and `Q`, and `δ = Δ/Q²`
/// for a ladder of `Δ < ½` — every query sits in the bound's regime
/// (`Δ < ½`, `T = Q² ≥ 4`).
pub fn close_points_grid(refined: bool) -> Vec<ClosePointQuery> {
    let mut deltas: Vec<f64> = CLOSE_DELTAS_BASE.to_vec();
    if refined {
        deltas.extend_from_slice(&CLOSE_DELTAS_HALF);
        deltas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    let mut grid = Vec::new();
    for k in 1..=3 {
        let curve = CurveSpec::new(k).expect("k in range");
        for m_max in geometric_steps(8.0, 64.0, refined) {
            for q_max in geometric_steps(8.0, 64.0, refined) {
                for &big_delta in &deltas {
                    grid.push(ClosePointQuery {
                        curve,
                        m_max,
                        q_max,
                        delta: big_delta / (q_max * q_max) as f64,
                    });
                }
            }
        }
    }
    grid
}

/// Fractional-part grid: fixed numerators, dyadic `M`, dyadic `δ ≤ ¼`.
pub fn fractional_grid() -> Vec<FractionalQuery> {
    let mut grid = Vec::new();
    for n in [1_000_003u64, 5_000_011] {
        for m in [64u64, 256, 1024, 4096] {
            for delta in [1.0 / 64.0, 1.0 / 16.0, 0.25] {
                grid.push(FractionalQuery { n, m, delta });
            }
        }
    }
    grid
}

/// Relative growth of the refined maximum over the base maximum.
pub fn refinement_drift(base_max: f64, refined_max: f64) -> f64 {
    if base_max == 0.0 {
        return if refined_max == 0.0 { 0.0 } else { f64::INFINITY };
    }
    (refined_max - base_max).abs() / base_max
}
