//! Naive brute-force counterparts of every optimized counter in `sqg-core`.
//!
//! Each oracle enumerates its full search space directly, with none of the
//! sorting, windowing, or candidate-narrowing machinery of the library
//! paths. The `report` subcommand runs seeded spot checks against them and
//! the acceptance suite runs them at volume; exact equality is required.

use sqg_core::rational_points::{is_close_to_curve, ClosePointQuery};
use sqg_core::sieve::Primes;
use sqg_core::window_counts::SextupleQuery;
use sqg_core::{gcd, isqrt};

/// `F(H, n)` by scanning every integer in the window and testing each prime
/// square divisor.
pub fn count_f_oracle(n: u64, h: u64, p_min: f64, primes: &Primes) -> u64 {
    let mut total = 0u64;
    for m in n + 1..=n + h {
        for &p in primes.at_least(p_min) {
            if p * p > m {
                break;
            }
            if m % (p * p) == 0 {
                total += 1;
            }
        }
    }
    total
}

/// `T(H, P)` by evaluating every admissible window start directly.
pub fn t_window_oracle(x: u64, h: u64, p_block: u64, primes: &Primes) -> u64 {
    let n_lo = x.div_ceil(2);
    let n_hi = x - h;
    // Per-integer representation counts over (x/2, x], then window sums.
    let lo = n_lo + 1;
    let mut reps = vec![0u32; (x - lo + 1) as usize];
    for &p in primes.in_block(p_block) {
        let p2 = p * p;
        if p2 > x {
            break;
        }
        let mut m = lo.div_ceil(p2) * p2;
        while m <= x {
            reps[(m - lo) as usize] += 1;
            m += p2;
        }
    }
    let mut best = 0u64;
    for n in n_lo..=n_hi {
        let mut window = 0u64;
        for i in 1..=h {
            window += reps[(n + i - lo) as usize] as u64;
        }
        best = best.max(window);
    }
    best
}

/// The sextuple count by scanning all ordered triples of representations.
pub fn sextuple_oracle(query: &SextupleQuery, primes: &Primes) -> u64 {
    // Independent pair enumeration: loop p then q directly.
    let mut entries: Vec<(u64, u64, u64)> = Vec::new();
    for &p in primes.in_block(query.p) {
        let p2 = p * p;
        let mut q = 1u64;
        loop {
            let v = match p2.checked_mul(q) {
                Some(v) if v <= query.x => v,
                _ => break,
            };
            if 2 * v >= query.x {
                entries.push((p, q, v));
            }
            q += 1;
        }
    }
    let fits = |g: u64, cap: f64| (g as f64) <= cap;
    let mut count = 0u64;
    for &(_, q3, v3) in &entries {
        for &(_, q2, v2) in &entries {
            for &(_, q1, v1) in &entries {
                if !(v3 < v2 && v2 < v1) {
                    continue;
                }
                if v1 > query.x.min(v3 + query.h - 1) {
                    continue;
                }
                if fits(gcd(gcd(q1, q2), q3), query.d)
                    && fits(gcd(q1, q2), query.d_prime)
                    && fits(gcd(q2, q3), query.d_prime)
                    && fits(gcd(q3, q1), query.d_prime)
                {
                    count += 1;
                }
            }
        }
    }
    count
}

/// The near-equality quadruple count by four nested loops.
pub fn near_equal_oracle(x: u64, h: u64, k: u64, l: u64, p_block: u64, primes: &Primes) -> u64 {
    let cap = (std::f64::consts::SQRT_2 * x as f64 / ((k * l * p_block * p_block) as f64)).floor()
        as u64;
    let block = primes.in_block(p_block);
    let mut count = 0u64;
    for &p1 in block {
        for &p2 in block {
            for t in 1..=cap {
                for u in 1..=cap {
                    let diff = (p1 * p1 * t).abs_diff(p2 * p2 * u) as u128;
                    if diff >= 1 && diff * (k as u128) * (l as u128) <= h as u128 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// The close-ratio quadruple count by direct evaluation of the inequality
/// over all four variables. The test multiplies
/// `0 < |√(u/t) − p₁/p₂| ≤ H/(KLP²√(ut)v)` through by `KLvP²·p₂·√(tu)` and
/// compares the two resulting squared integer inequalities in `i128`.
pub fn close_ratio_oracle(
    x: u64,
    h: u64,
    k: u64,
    l: u64,
    p_block: u64,
    v: u64,
    primes: &Primes,
) -> u64 {
    let cap =
        (std::f64::consts::SQRT_2 * x as f64 / ((k * l * v * p_block * p_block) as f64)).floor()
            as u64;
    let block = primes.in_block(p_block);
    let scale = (k as i128) * (l as i128) * (v as i128) * (p_block as i128) * (p_block as i128);
    let mut count = 0u64;
    for t in 1..=cap {
        for u in t..=cap {
            if gcd(u, t) != 1 {
                continue;
            }
            for &p2 in block {
                for &p1 in block {
                    if !(p2 < p1) {
                        continue;
                    }
                    // Exact ratio is excluded by strict positivity.
                    if (u as i128) * (p2 as i128).pow(2) == (t as i128) * (p1 as i128).pow(2) {
                        continue;
                    }
                    let center = scale * (p2 as i128) * (u as i128);
                    let slack = (h as i128) * (p2 as i128);
                    let target =
                        (scale * (p1 as i128) * (t as i128)) * (scale * (p1 as i128) * (u as i128));
                    let upper = center + slack;
                    if target > upper * upper {
                        continue;
                    }
                    let lower = center - slack;
                    if lower > 0 && lower * lower > target {
                        continue;
                    }
                    count += 1;
                }
            }
        }
    }
    count
}

/// The close-point count by looping over every `(m, n, r, q)` with
/// `r ≤ ⌈2·Q·F_max⌉`, sharing only the scalar closeness predicate with the
/// library path.
pub fn close_points_oracle(query: &ClosePointQuery) -> u64 {
    let f_max = query.curve.f(1.0);
    let r_max = (2.0 * query.q_max as f64 * f_max).ceil() as u64 + 1;
    let mut count = 0u64;
    for n in 1..=query.m_max {
        for m in 0..=n {
            if gcd(m, n) != 1 {
                continue;
            }
            for q in 1..=query.q_max {
                for r in 1..=r_max {
                    if gcd(r, q) == 1
                        && is_close_to_curve(&query.curve, m, n, r, q, query.delta)
                    {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// `R(f_n, δ)` recomputed through floating-point fractional parts. The
/// integer path is authoritative; this route exists to cross-check it.
pub fn count_r_oracle(n: u64, m_lo: u64, delta: f64) -> u64 {
    let mut count = 0u64;
    for m in m_lo..=2 * m_lo {
        let m2 = m * m;
        let frac = (n % m2) as f64 / m2 as f64;
        if frac.min(1.0 - frac) <= delta {
            count += 1;
        }
    }
    count
}

/// Primes big enough for any oracle at scale `x` and block `P`.
pub fn oracle_primes(x: u64, p_block: u64) -> Primes {
    Primes::up_to(isqrt(x).max(2 * p_block) + 1)
}
