//! Exact counts of integers `p²q` (p prime in a dyadic block) falling in
//! short windows, and two four-variable near-equality systems derived from
//! them.
//!
//! The counters:
//!
//! - [`count_f`]: pairs `(p, q)` with `n < p²q ≤ n+H` and `p ≥ p_min`;
//!   [`count_f_dyadic`] restricts `p` to a dyadic block `[P, 2P)`.
//! - [`compute_t`]: the worst window — the maximum of the dyadic count over
//!   all windows `(n, n+H]` with `x/2 ≤ n ≤ x−H`.
//! - [`count_sextuples`]: ordered triples of `p²q` values chained strictly
//!   inside a window of width `H−1` in `[x/2, x]`, subject to gcd caps `D`
//!   (all three `q`'s) and `D'` (each pair).
//! - [`count_near_equal_quadruples`]: `(p₁, p₂, t, u)` with
//!   `1 ≤ |p₁²t − p₂²u| ≤ H/(KL)` and `t, u ≤ √2·x/(KLP²)`.
//! - [`count_close_ratio_quadruples`]: the coprime reduction of the same
//!   system, `0 < |√(u'/t') − p₁/p₂| ≤ H/(KLP²√(u't')v)`.
//!
//! Every counter is exact; window membership and near-equality tests use
//! integer arithmetic (128-bit where products demand it) so results never
//! depend on floating-point rounding. Each `CountReport` pairs the count
//! with the matching upper-bound formula evaluated at the same arguments.

use crate::sieve::Primes;
use crate::{domain, gcd, isqrt, CountReport, Result};
use rayon::prelude::*;
use serde::Serialize;

/// One representation `value = p²·q` with `p` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeSquareValue {
    pub p: u64,
    pub q: u64,
    pub value: u64,
}

impl PrimeSquareValue {
    fn new(p: u64, q: u64) -> Option<PrimeSquareValue> {
        let v = (p as u128) * (p as u128) * (q as u128);
        if v <= u64::MAX as u128 {
            Some(PrimeSquareValue {
                p,
                q,
                value: v as u64,
            })
        } else {
            None
        }
    }
}

fn check_prime_limit(primes: &Primes, needed: u64, what: &str) -> Result<()> {
    if primes.limit() < needed {
        return Err(domain(format!(
            "{what}: prime list reaches {} but {needed} is needed",
            primes.limit()
        )));
    }
    Ok(())
}

/// All representations `p²q ∈ [lo, hi]` with `p` prime in `[p_block, 2·p_block)`,
/// sorted by `(value, p)`. Distinct `(p, q)` pairs giving the same integer
/// appear as separate entries.
pub fn pq_values(lo: u64, hi: u64, p_block: u64, primes: &Primes) -> Vec<PrimeSquareValue> {
    if lo > hi {
        return Vec::new();
    }
    let mut vals: Vec<PrimeSquareValue> = primes
        .in_block(p_block)
        .par_iter()
        .flat_map_iter(|&p| {
            let p2 = (p as u128) * (p as u128);
            let q_lo = if p2 >= lo as u128 {
                1
            } else {
                ((lo as u128).div_ceil(p2)) as u64
            };
            let q_hi = (hi as u128 / p2) as u64;
            (q_lo..=q_hi).filter_map(move |q| PrimeSquareValue::new(p, q))
        })
        .collect();
    vals.par_sort_unstable_by_key(|e| (e.value, e.p));
    vals
}

/// `F(H, n)`: number of pairs `(p, q)` with `p` prime, `p ≥ p_min`, and
/// `n < p²q ≤ n+H`.
pub fn count_f(n: u64, h: u64, p_min: f64, primes: &Primes) -> Result<u64> {
    if n == 0 || h == 0 {
        return Err(domain("count_f: need n >= 1 and H >= 1"));
    }
    if !(p_min >= 2.0) {
        return Err(domain("count_f: p_min must be >= 2"));
    }
    let hi = n
        .checked_add(h)
        .ok_or_else(|| domain("count_f: n + H exceeds u64"))?;
    check_prime_limit(primes, isqrt(hi), "count_f")?;
    let mut total = 0u64;
    for &p in primes.at_least(p_min) {
        let p2 = (p as u128) * (p as u128);
        if p2 > hi as u128 {
            break;
        }
        total += (hi as u128 / p2 - n as u128 / p2) as u64;
    }
    Ok(total)
}

/// `F(H, P, n)`: the same count with `p` restricted to the dyadic block
/// `[P, 2P)`.
pub fn count_f_dyadic(n: u64, h: u64, p_block: u64, primes: &Primes) -> Result<u64> {
    if n == 0 || h == 0 {
        return Err(domain("count_f_dyadic: need n >= 1 and H >= 1"));
    }
    if p_block < 2 {
        return Err(domain("count_f_dyadic: P must be >= 2"));
    }
    let hi = n
        .checked_add(h)
        .ok_or_else(|| domain("count_f_dyadic: n + H exceeds u64"))?;
    check_prime_limit(primes, isqrt(hi).min(2 * p_block), "count_f_dyadic")?;
    let mut total = 0u64;
    for &p in primes.in_block(p_block) {
        let p2 = (p as u128) * (p as u128);
        if p2 > hi as u128 {
            break;
        }
        total += (hi as u128 / p2 - n as u128 / p2) as u64;
    }
    Ok(total)
}

/// Window bound for `T(H, P)` at scale `x`:
/// `x^{1/15}·P^{8/15} + H^{1/6}·P^{2/3} + H^{1/4}·P/x^{1/4}`.
pub fn t_window_bound(x: u64, h: u64, p: u64) -> f64 {
    t_window_bound_f(x as f64, h as f64, p as f64)
}

/// [`t_window_bound`] over real arguments, for callers whose window height
/// is not an integer.
pub fn t_window_bound_f(x: f64, h: f64, p: f64) -> f64 {
    x.powf(1.0 / 15.0) * p.powf(8.0 / 15.0)
        + h.powf(1.0 / 6.0) * p.powf(2.0 / 3.0)
        + h.powf(0.25) * p / x.powf(0.25)
}

/// `T(H, P)`: the maximum of `F(H, P, n)` over integers `n ∈ [x/2, x−H]`,
/// paired with [`t_window_bound`].
///
/// The window count only increases when the window's lower edge reaches a
/// value, so the maximum occurs at `n = x/2` or at some `n = value − H`; the
/// sweep evaluates exactly those candidates against the sorted value list.
pub fn compute_t(x: u64, h: u64, p_block: u64, primes: &Primes) -> Result<CountReport> {
    if p_block < 2 {
        return Err(domain("compute_t: P must be >= 2"));
    }
    if h == 0 || x < 4 * h {
        return Err(domain("compute_t: need H >= 1 and x >= 4H"));
    }
    check_prime_limit(primes, isqrt(x).min(2 * p_block), "compute_t")?;
    let n_lo = x.div_ceil(2);
    let n_hi = x - h;
    let entries = pq_values(n_lo + 1, x, p_block, primes);
    let values: Vec<u64> = entries.iter().map(|e| e.value).collect();
    let bound = t_window_bound(x, h, p_block);

    let window_count = |n: u64| -> u64 {
        let lo = values.partition_point(|&v| v <= n);
        let hi = values.partition_point(|&v| v <= n + h);
        (hi - lo) as u64
    };
    let mut exact = window_count(n_lo).max(window_count(n_hi));
    for &v in &values {
        for cand in [v.saturating_sub(h), v.saturating_sub(1)] {
            if (n_lo..=n_hi).contains(&cand) {
                exact = exact.max(window_count(cand));
            }
        }
    }
    Ok(CountReport::new(exact, bound))
}

/// Arguments of the sextuple count: window scale, dyadic prime block, and
/// the two gcd caps.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SextupleQuery {
    pub x: u64,
    pub h: u64,
    pub p: u64,
    /// Cap on `gcd(q₁, q₂, q₃)`.
    pub d: f64,
    /// Cap on each pairwise gcd of the `q`'s.
    pub d_prime: f64,
}

/// Sextuple totals: every ordered triple, and the subset with pairwise
/// distinct primes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SextupleCounts {
    pub all: u64,
    pub distinct_p: u64,
}

/// Bound for the sextuple count: `x / (H^{γ−3}·log^6 H)`.
pub fn sextuple_bound(x: u64, h: u64, gamma: f64) -> f64 {
    let (x, h) = (x as f64, h as f64);
    x / (h.powf(gamma - 3.0) * h.ln().powi(6))
}

/// `S(H, P)`: ordered sextuples `(p₁, p₂, p₃, q₁, q₂, q₃)` with each `pᵢ`
/// prime in `[P, 2P)`, values chained as
/// `x/2 ≤ p₃²q₃ < p₂²q₂ < p₁²q₁ ≤ min(x, p₃²q₃ + H − 1)`, gcd of all three
/// `q`'s at most `D`, and each pairwise gcd at most `D'`.
///
/// The scan anchors each triple at its minimal element, so strict ordering
/// of the three values guarantees every triple is counted exactly once.
pub fn count_sextuples(query: &SextupleQuery, primes: &Primes) -> Result<SextupleCounts> {
    if query.p < 2 {
        return Err(domain("count_sextuples: P must be >= 2"));
    }
    if query.x < 2 {
        return Err(domain("count_sextuples: x must be >= 2"));
    }
    check_prime_limit(primes, isqrt(query.x).min(2 * query.p), "count_sextuples")?;
    let mut counts = SextupleCounts {
        all: 0,
        distinct_p: 0,
    };
    if query.h <= 1 {
        return Ok(counts);
    }
    let lo = query.x.div_ceil(2);
    let entries = pq_values(lo, query.x, query.p, primes);
    let fits = |g: u64, cap: f64| (g as f64) <= cap;
    for (i, e3) in entries.iter().enumerate() {
        let window_hi = query.x.min(e3.value + query.h - 1);
        for (j, e2) in entries.iter().enumerate().skip(i + 1) {
            if e2.value > window_hi {
                break;
            }
            if e2.value == e3.value {
                continue;
            }
            if !fits(gcd(e2.q, e3.q), query.d_prime) {
                continue;
            }
            for e1 in entries.iter().skip(j + 1) {
                if e1.value > window_hi {
                    break;
                }
                if e1.value == e2.value {
                    continue;
                }
                if !fits(gcd(e1.q, e2.q), query.d_prime)
                    || !fits(gcd(e1.q, e3.q), query.d_prime)
                    || !fits(gcd(gcd(e1.q, e2.q), e3.q), query.d)
                {
                    continue;
                }
                counts.all += 1;
                if e1.p != e2.p && e2.p != e3.p && e1.p != e3.p {
                    counts.distinct_p += 1;
                }
            }
        }
    }
    Ok(counts)
}

/// [`count_sextuples`] paired with [`sextuple_bound`] at the given `gamma`.
pub fn count_s(query: &SextupleQuery, gamma: f64, primes: &Primes) -> Result<CountReport> {
    let counts = count_sextuples(query, primes)?;
    Ok(CountReport::new(
        counts.all,
        sextuple_bound(query.x, query.h, gamma),
    ))
}

/// Bound for the near-equality quadruple count:
/// `H²·log x/(K²L²) + x·log x/(KLP^{4/3}) + H^{1/3}·x·log x/(K^{4/3}L^{4/3}P^{4/3})`.
pub fn near_equal_bound(x: u64, h: u64, k: u64, l: u64, p: u64) -> f64 {
    let (x, h, k, l, p) = (x as f64, h as f64, k as f64, l as f64, p as f64);
    let log_x = x.ln();
    h * h * log_x / (k * k * l * l)
        + x * log_x / (k * l * p.powf(4.0 / 3.0))
        + h.powf(1.0 / 3.0) * x * log_x / ((k * l).powf(4.0 / 3.0) * p.powf(4.0 / 3.0))
}

/// Range cap `⌊√2·x/(K·L·P²·v)⌋` shared by the two quadruple systems.
pub fn quadruple_range_cap(x: u64, k: u64, l: u64, p: u64, v: u64) -> u64 {
    let denom = (k as u128) * (l as u128) * (p as u128) * (p as u128) * (v as u128);
    (std::f64::consts::SQRT_2 * x as f64 / denom as f64).floor() as u64
}

/// Quadruples `(p₁, p₂, t, u)` with both primes in `[P, 2P)`,
/// `1 ≤ t, u ≤ √2·x/(KLP²)`, and `1 ≤ |p₁²t − p₂²u| ≤ H/(KL)`, paired with
/// [`near_equal_bound`].
///
/// The difference condition is evaluated in integers
/// (`|p₁²t − p₂²u| · KL ≤ H`), and the scan is a two-pointer pass over the
/// sorted multiset of all `p²t` values: each unordered pair at distance in
/// `[1, H/(KL)]` yields exactly two ordered quadruples.
pub fn count_near_equal_quadruples(
    x: u64,
    h: u64,
    k: u64,
    l: u64,
    p_block: u64,
    primes: &Primes,
) -> Result<CountReport> {
    if p_block < 2 {
        return Err(domain("count_near_equal_quadruples: P must be >= 2"));
    }
    if k == 0 || l == 0 {
        return Err(domain("count_near_equal_quadruples: K and L must be >= 1"));
    }
    check_prime_limit(primes, 2 * p_block, "count_near_equal_quadruples")?;
    let bound = near_equal_bound(x, h, k, l, p_block);
    let diff_max = ((h as u128) / ((k as u128) * (l as u128))).min(u64::MAX as u128) as u64;
    let cap = quadruple_range_cap(x, k, l, p_block, 1);
    if diff_max == 0 || cap == 0 {
        return Ok(CountReport::new(0, bound));
    }

    let mut values: Vec<u64> = primes
        .in_block(p_block)
        .iter()
        .flat_map(|&p| (1..=cap).map(move |t| p * p * t))
        .collect();
    values.sort_unstable();

    let mut one_side = 0u64;
    let mut lo = 0usize;
    let mut hi = 0usize;
    for i in 0..values.len() {
        let base = values[i];
        if lo < i + 1 {
            lo = i + 1;
        }
        while lo < values.len() && values[lo] <= base {
            lo += 1;
        }
        if hi < lo {
            hi = lo;
        }
        while hi < values.len() && values[hi] - base <= diff_max {
            hi += 1;
        }
        one_side += (hi - lo) as u64;
    }
    Ok(CountReport::new(2 * one_side, bound))
}

/// Exact test for `0 < |√(u/t) − p₁/p₂| ≤ H/(K·L·P²·√(u·t)·v)`.
///
/// Multiplying through by `K·L·v·P²·p₂·√(t·u)` turns both comparisons into
/// integer ones; the products stay within `u128` at the supported scales.
pub fn close_ratio_test(
    u: u64,
    t: u64,
    p1: u64,
    p2: u64,
    h: u64,
    k: u64,
    l: u64,
    p_block: u64,
    v: u64,
) -> bool {
    let u = u as u128;
    let t = t as u128;
    let p1 = p1 as u128;
    let p2 = p2 as u128;
    // Strict positivity: √(u/t) = p1/p2 iff u·p2² = t·p1².
    if u * p2 * p2 == t * p1 * p1 {
        return false;
    }
    let d = (k as u128) * (l as u128) * (v as u128) * (p_block as u128) * (p_block as u128);
    let x_side = d * p2 * u;
    let r_side = (h as u128) * p2;
    let y_sq = (d * p1 * t) * (d * p1 * u);
    // |X − d·p1·√(tu)| ≤ R with X, R, and (d·p1)²·t·u all integers.
    if y_sq > (x_side + r_side) * (x_side + r_side) {
        return false;
    }
    if x_side > r_side {
        let lo = x_side - r_side;
        if lo * lo > y_sq {
            return false;
        }
    }
    true
}

/// Quadruples `(p₁, p₂, t', u')` with `P ≤ p₂ < p₁ < 2P`,
/// `1 ≤ t' ≤ u' ≤ √2·x/(KLP²v)`, `gcd(u', t') = 1`, and
/// `0 < |√(u'/t') − p₁/p₂| ≤ H/(KLP²√(u't')v)`.
///
/// For each coprime pair the admissible `p₁` lie in a narrow ratio window
/// around `p₂·√(u'/t')`; candidates come from a binary search over the prime
/// block (padded by one on each side) and are confirmed by
/// [`close_ratio_test`].
pub fn count_close_ratio_quadruples(
    x: u64,
    h: u64,
    k: u64,
    l: u64,
    p_block: u64,
    v: u64,
    primes: &Primes,
) -> Result<u64> {
    if p_block < 2 {
        return Err(domain("count_close_ratio_quadruples: P must be >= 2"));
    }
    if k == 0 || l == 0 || v == 0 {
        return Err(domain(
            "count_close_ratio_quadruples: K, L, v must be >= 1",
        ));
    }
    check_prime_limit(primes, 2 * p_block, "count_close_ratio_quadruples")?;
    let cap = quadruple_range_cap(x, k, l, p_block, v);
    if cap == 0 {
        return Ok(0);
    }
    let block = primes.in_block(p_block);
    let scale = (k as f64) * (l as f64) * (p_block as f64) * (p_block as f64) * (v as f64);
    let mut count = 0u64;
    for t in 1..=cap {
        for u in t..=cap {
            if gcd(u, t) != 1 {
                continue;
            }
            let center = (u as f64 / t as f64).sqrt();
            let radius = h as f64 / (scale * ((u as f64) * (t as f64)).sqrt());
            for &p2 in block {
                let lo_f = p2 as f64 * (center - radius);
                let hi_f = p2 as f64 * (center + radius);
                let lo_idx = block.partition_point(|&q| (q as f64) < lo_f).saturating_sub(1);
                let hi_idx = (block.partition_point(|&q| (q as f64) <= hi_f) + 1).min(block.len());
                for &p1 in &block[lo_idx..hi_idx] {
                    if p1 <= p2 {
                        continue;
                    }
                    if close_ratio_test(u, t, p1, p2, h, k, l, p_block, v) {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn primes_to(limit: u64) -> Primes {
        Primes::up_to(limit)
    }

    #[test]
    fn count_f_by_hand() {
        let primes = primes_to(100);
        // 49 = 7²·1 and 50 = 5²·2 are the p²q values in (48, 50].
        assert_eq!(count_f(48, 2, 5.0, &primes).unwrap(), 2);
        assert_eq!(count_f(1, 2, 2.0, &primes).unwrap(), 0);
    }

    #[test]
    fn count_f_dyadic_by_hand() {
        let primes = primes_to(100);
        assert_eq!(count_f_dyadic(48, 2, 5, &primes).unwrap(), 2);
        // P² > n+H makes the count empty.
        assert_eq!(count_f_dyadic(48, 2, 8, &primes).unwrap(), 0);
    }

    #[test]
    fn dyadic_blocks_partition_count_f() {
        let primes = primes_to(1000);
        let n = 10_000u64;
        let h = 500u64;
        let full = count_f(n, h, 4.0, &primes).unwrap();
        let mut sum = 0u64;
        let mut p = 4u64;
        while p * p <= n + h {
            sum += count_f_dyadic(n, h, p, &primes).unwrap();
            p *= 2;
        }
        assert_eq!(sum, full);
    }

    #[test]
    fn compute_t_empty_when_block_exceeds_range() {
        let primes = primes_to(4000);
        // P² > x: no value p²q ≤ x exists with p ≥ P.
        let r = compute_t(1_000_000, 16, 1024, &primes).unwrap();
        assert_eq!(r.exact, 0);
        assert!(r.bound_value > 0.0);
    }

    #[test]
    fn compute_t_single_width_window() {
        let primes = primes_to(100);
        let r = compute_t(400, 1, 7, &primes).unwrap();
        // Values 7²q in (201, 400]: q = 5..8 -> nonempty, so the max is 1.
        assert_eq!(r.exact, 1);
    }

    #[test]
    fn compute_t_matches_naive_small() {
        let primes = primes_to(2000);
        for (x, h, p) in [(2_000u64, 32u64, 4u64), (5_000, 64, 8), (9_000, 16, 5)] {
            let fast = compute_t(x, h, p, &primes).unwrap().exact;
            let mut naive = 0u64;
            for n in x.div_ceil(2)..=(x - h) {
                naive = naive.max(count_f_dyadic(n, h, p, &primes).unwrap());
            }
            assert_eq!(fast, naive, "x={x} h={h} p={p}");
        }
    }

    #[test]
    fn sextuples_empty_for_unit_window() {
        let primes = primes_to(100);
        let q = SextupleQuery {
            x: 10_000,
            h: 1,
            p: 8,
            d: 1e12,
            d_prime: 1e12,
        };
        assert_eq!(count_sextuples(&q, &primes).unwrap().all, 0);
    }

    #[test]
    fn sextuple_gcd_caps_inactive_when_huge() {
        let primes = primes_to(100);
        let x = 20_000u64;
        let capped = SextupleQuery {
            x,
            h: 40,
            p: 8,
            d: 2.0 * x as f64,
            d_prime: 2.0 * x as f64,
        };
        let tight = SextupleQuery {
            d: 1.0,
            d_prime: 1.0,
            ..capped
        };
        let a = count_sextuples(&capped, &primes).unwrap().all;
        let b = count_sextuples(&tight, &primes).unwrap().all;
        assert!(a >= b);
        // With inactive caps the count equals the chain-only enumeration.
        let entries = pq_values(x.div_ceil(2), x, 8, &primes);
        let mut chain_only = 0u64;
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                for k in j + 1..entries.len() {
                    let (v3, v2, v1) = (entries[i].value, entries[j].value, entries[k].value);
                    if v3 < v2 && v2 < v1 && v1 <= x.min(v3 + 40 - 1) {
                        chain_only += 1;
                    }
                }
            }
        }
        assert_eq!(a, chain_only);
    }

    #[test]
    fn near_equal_empty_below_unit_difference() {
        let primes = primes_to(100);
        let r = count_near_equal_quadruples(10_000, 4, 4, 4, 4, &primes).unwrap();
        assert_eq!(r.exact, 0);
    }

    #[test]
    fn near_equal_same_prime_branch() {
        let primes = primes_to(100);
        // p1 = p2 = p: pairs (t, u), t != u, count iff p²|t−u| ≤ H/(KL).
        let (x, h, k, l, p) = (2_000u64, 800u64, 1u64, 1u64, 11u64);
        let report = count_near_equal_quadruples(x, h, k, l, p, &primes).unwrap();
        let cap = quadruple_range_cap(x, k, l, p, 1);
        let block = primes_to(100);
        let mut same_p = 0u64;
        for &pp in block.in_block(p) {
            for t in 1..=cap {
                for u in 1..=cap {
                    let diff = (pp * pp * t).abs_diff(pp * pp * u);
                    if diff >= 1 && diff * k * l <= h {
                        same_p += 1;
                    }
                }
            }
        }
        assert!(report.exact >= same_p);
    }

    #[test]
    fn close_ratio_counts_small_instance() {
        let primes = primes_to(100);
        // Large H/(KL) so a handful of pairs qualifies; checked against the
        // direct four-variable scan in the integration tests.
        let n = count_close_ratio_quadruples(5_000, 600, 1, 1, 5, 1, &primes).unwrap();
        let cap = quadruple_range_cap(5_000, 1, 1, 5, 1);
        let block = primes.in_block(5);
        let mut direct = 0u64;
        for t in 1..=cap {
            for u in t..=cap {
                if gcd(u, t) != 1 {
                    continue;
                }
                for (i, &p2) in block.iter().enumerate() {
                    for &p1 in &block[i + 1..] {
                        if close_ratio_test(u, t, p1, p2, 600, 1, 1, 5, 1) {
                            direct += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(n, direct);
    }

    #[test]
    fn close_ratio_zero_when_cap_vanishes() {
        let primes = primes_to(100);
        assert_eq!(
            count_close_ratio_quadruples(100, 10, 8, 8, 8, 4, &primes).unwrap(),
            0
        );
    }

    #[test]
    fn close_ratio_test_rejects_exact_ratio() {
        // u/t = (p1/p2)²: distance is exactly zero, excluded by strictness.
        assert!(!close_ratio_test(49, 25, 7, 5, 1_000_000, 1, 1, 5, 1));
    }
}
