//! The consolidated experiment report: every count, bound fit, regime
//! verdict, and hard invariant in one deterministic JSON document.
//!
//! Hard invariants are exact identities (sequence match, telescoping,
//! oracle equivalences) and the pinned statistical checks (density, ratio
//! bands, bound-fit stability). The process exits nonzero when any of them
//! fails, with the failing check named in the `checks` array.

use crate::grids;
use crate::oracles;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sqg_core::fractional::{count_r, regime_table, FractionalQuery};
use sqg_core::params::{derive_params, min_interpolate, min_split};
use sqg_core::rational_points::{check_hypotheses, count_close_points, ClosePointQuery, CurveSpec};
use sqg_core::sieve::{is_squarefree, sieve_segment, Primes};
use sqg_core::stats::{alpha_estimate, b_estimate, scan_range, GapScan};
use sqg_core::window_counts::{
    compute_t, count_near_equal_quadruples, count_s, count_sextuples, SextupleQuery,
};
use sqg_core::{isqrt, CountReport};

pub const SCHEMA_VERSION: u32 = 1;

/// Gammas every report needs regardless of the requested list: the exact
/// identities run at 0, 0.5, 1, 2, 3.5 and the ratio bands at 0..3, 3.5.
const REQUIRED_GAMMAS: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 3.0, 3.5];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub x: u64,
    pub gammas: Vec<f64>,
    pub segment_size: u32,
    pub threads: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveSection {
    pub x: u64,
    pub squarefree_up_to_x: u64,
    pub density: f64,
    pub density_error: f64,
    pub first_seven: Vec<u64>,
    pub last_squarefree: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentRow {
    pub gamma: f64,
    pub full_sum: f64,
    pub half_sum: f64,
    pub half_over_full: f64,
    pub b_hat: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramRow {
    pub h: u64,
    pub count: u64,
    pub alpha_hat: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MirskySection {
    pub alpha1_empirical: f64,
    pub alpha1_product_oracle: f64,
    pub b2_at_x: f64,
    pub b2_at_half_x: f64,
    pub b2_relative_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TWindowRow {
    pub x: u64,
    pub h: u64,
    pub p: u64,
    pub exact: u64,
    pub bound_value: f64,
    pub fitted_constant: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NearEqualRow {
    pub x: u64,
    pub h: u64,
    pub k: u64,
    pub l: u64,
    pub p: u64,
    pub exact: u64,
    pub bound_value: f64,
    pub fitted_constant: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosePointRow {
    pub curve_k: u32,
    pub m_max: u64,
    pub q_max: u64,
    pub delta: f64,
    pub exact: u64,
    pub bound_value: f64,
    pub fitted_constant: f64,
    pub delta_q2: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FractionalRow {
    pub n: u64,
    pub m: u64,
    pub delta: f64,
    pub exact: u64,
    pub bound_value: f64,
    pub fitted_constant: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SextupleRow {
    pub x: u64,
    pub h: u64,
    pub p: u64,
    pub d: f64,
    pub d_prime: f64,
    pub gamma: f64,
    pub exact: u64,
    pub exact_distinct_p: u64,
    pub bound_value: f64,
    pub fitted_constant: f64,
    pub oracle_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitStability {
    pub base_max: f64,
    pub refined_max: f64,
    pub relative_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegimeSummary {
    pub gamma: f64,
    pub x: u64,
    pub all_covered: bool,
    pub uncovered: Vec<u64>,
    pub rows: Vec<sqg_core::fractional::RegimeRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDoc {
    pub schema: u32,
    pub config: ConfigEcho,
    pub sieve: SieveSection,
    pub moments: Vec<MomentRow>,
    pub histogram: Vec<HistogramRow>,
    pub mirsky: MirskySection,
    pub t_window_grid: Vec<TWindowRow>,
    pub t_window_fit: FitStability,
    pub near_equal_grid: Vec<NearEqualRow>,
    pub near_equal_fit: FitStability,
    pub close_points_grid: Vec<ClosePointRow>,
    pub close_points_fit: FitStability,
    pub fractional_grid: Vec<FractionalRow>,
    pub sextuples: Vec<SextupleRow>,
    pub regimes: Vec<RegimeSummary>,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

fn check(checks: &mut Vec<Check>, name: &str, pass: bool, detail: String) {
    checks.push(Check {
        name: name.to_string(),
        pass,
        detail,
    });
}

/// Product over primes below the limit of `(1 − 2/p²)`: the density of
/// consecutive squarefree pairs, the independent target for `α̂(1)`.
pub fn adjacent_pair_density(prime_limit: u64) -> f64 {
    let primes = Primes::up_to(prime_limit);
    let mut product = 1.0f64;
    for &p in primes.as_slice() {
        product *= 1.0 - 2.0 / (p as f64 * p as f64);
    }
    product
}

fn union_gammas(requested: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = requested.iter().copied().chain(REQUIRED_GAMMAS).collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.dedup();
    all
}

fn gamma_index(gammas: &[f64], g: f64) -> usize {
    gammas.iter().position(|&x| x == g).expect("gamma present")
}

pub struct ReportOutcome {
    pub doc: ReportDoc,
    pub all_passed: bool,
}

pub fn build_report(
    x: u64,
    requested_gammas: &[f64],
    segment_size: u32,
    threads: usize,
    seed: u64,
) -> anyhow::Result<ReportOutcome> {
    let mut checks = Vec::new();
    let gammas = union_gammas(requested_gammas);
    let scan = scan_range(1, x, segment_size, &gammas)?;
    let scan_half = scan_range(1, x / 2, segment_size, &gammas)?;

    let sieve_section = sieve_checks(x, &scan, seed, &mut checks)?;
    let moments = moment_checks(x, &gammas, &scan, &mut checks)?;
    let histogram: Vec<HistogramRow> = scan
        .histogram
        .counts
        .iter()
        .map(|(&h, &count)| HistogramRow {
            h,
            count,
            alpha_hat: alpha_estimate(&scan.histogram, h),
        })
        .collect();
    let mirsky = mirsky_checks(&scan, &scan_half, &mut checks)?;

    let (t_rows, t_fit) = t_window_section(&mut checks)?;
    let (ne_rows, ne_fit) = near_equal_section(&mut checks)?;
    let (cp_rows, cp_fit) = close_points_section(&mut checks)?;
    let fractional_rows = fractional_section()?;
    let sextuples = sextuple_section(&mut checks)?;
    let regimes = regime_section(&mut checks)?;
    oracle_spot_checks(seed, &mut checks)?;
    hypothesis_checks(&mut checks);
    min_inequality_checks(seed, &mut checks)?;

    let all_passed = checks.iter().all(|c| c.pass);
    let doc = ReportDoc {
        schema: SCHEMA_VERSION,
        config: ConfigEcho {
            x,
            gammas: requested_gammas.to_vec(),
            segment_size,
            threads,
            seed,
        },
        sieve: sieve_section,
        moments,
        histogram,
        mirsky,
        t_window_grid: t_rows,
        t_window_fit: t_fit,
        near_equal_grid: ne_rows,
        near_equal_fit: ne_fit,
        close_points_grid: cp_rows,
        close_points_fit: cp_fit,
        fractional_grid: fractional_rows,
        sextuples,
        regimes,
        checks,
        all_passed,
    };
    Ok(ReportOutcome { doc, all_passed })
}

fn sieve_checks(
    x: u64,
    scan: &GapScan,
    seed: u64,
    checks: &mut Vec<Check>,
) -> anyhow::Result<SieveSection> {
    let primes = Primes::up_to(isqrt(x.max(200_000)) + 1);
    let first = sieve_segment(1, 16, &primes)?;
    let first_seven: Vec<u64> = first.iter_squarefree().take(7).collect();
    check(
        checks,
        "sequence_match",
        first_seven == [1, 2, 3, 5, 6, 7, 10],
        format!("first seven squarefree: {first_seven:?}"),
    );

    // Sieve vs trial division on a fixed prefix plus one seeded window.
    let mut mismatches = 0u64;
    let prefix = sieve_segment(1, 200_000, &primes)?;
    for i in 0..prefix.len() {
        if prefix.bit(i) != is_squarefree(1 + i as u64)? {
            mismatches += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = rng.gen_range(1_000_000u64..100_000_000);
    let window_primes = Primes::up_to(isqrt(base + 50_000) + 1);
    let window = sieve_segment(base, 50_000, &window_primes)?;
    for i in 0..window.len() {
        if window.bit(i) != is_squarefree(base + i as u64)? {
            mismatches += 1;
        }
    }
    check(
        checks,
        "sieve_oracle_equivalence",
        mismatches == 0,
        format!("prefix [1, 200000] and window [{base}, {base}+50000): {mismatches} mismatches"),
    );

    let q = scan.squarefree + 1;
    let density = q as f64 / x as f64;
    let target = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    let density_error = (density - target).abs();
    check(
        checks,
        "density",
        density_error <= 5e-4,
        format!("Q({x}) = {q}, density {density}, |density - 6/pi^2| = {density_error:e}"),
    );
    Ok(SieveSection {
        x,
        squarefree_up_to_x: q,
        density,
        density_error,
        first_seven,
        last_squarefree: scan.last_squarefree,
    })
}

fn moment_checks(
    x: u64,
    gammas: &[f64],
    scan: &GapScan,
    checks: &mut Vec<Check>,
) -> anyhow::Result<Vec<MomentRow>> {
    let rows: Vec<MomentRow> = gammas
        .iter()
        .enumerate()
        .map(|(i, &gamma)| {
            let full = scan.moment(i);
            let half = scan.half_moment(i);
            Ok(MomentRow {
                gamma,
                full_sum: full,
                half_sum: half,
                half_over_full: half / full,
                b_hat: b_estimate(&scan.histogram, gamma)?,
            })
        })
        .collect::<sqg_core::Result<_>>()?;

    let i1 = gamma_index(gammas, 1.0);
    let telescope = scan.moment(i1) == (scan.last_squarefree - 1) as f64;
    check(
        checks,
        "telescoping_identity",
        telescope,
        format!(
            "gamma=1 moment {} vs last squarefree - 1 = {}",
            scan.moment(i1),
            scan.last_squarefree - 1
        ),
    );

    let mut worst = 0.0f64;
    for &g in &[0.0, 0.5, 2.0, 3.5] {
        let i = gamma_index(gammas, g);
        let direct = scan.moment(i);
        let via_hist = b_estimate(&scan.histogram, g)? * x as f64;
        worst = worst.max((direct - via_hist).abs() / direct.abs());
    }
    check(
        checks,
        "rearrangement_identity",
        worst <= 1e-9,
        format!("worst relative gap over gamma in {{0, 0.5, 2, 3.5}}: {worst:e}"),
    );

    let mut ratio_ok = true;
    let mut detail = String::new();
    for &(g, lo, hi) in &[
        (0.0, 0.47, 0.53),
        (1.0, 0.47, 0.53),
        (2.0, 0.47, 0.53),
        (3.0, 0.47, 0.53),
        (3.5, 0.44, 0.56),
    ] {
        let i = gamma_index(gammas, g);
        let ratio = scan.half_moment(i) / scan.moment(i);
        if !(lo..=hi).contains(&ratio) {
            ratio_ok = false;
        }
        detail.push_str(&format!("gamma={g}: {ratio:.6}; "));
    }
    check(checks, "half_full_ratio", ratio_ok, detail);
    Ok(rows)
}

fn mirsky_checks(
    scan: &GapScan,
    scan_half: &GapScan,
    checks: &mut Vec<Check>,
) -> anyhow::Result<MirskySection> {
    let alpha1 = alpha_estimate(&scan.histogram, 1);
    let product = adjacent_pair_density(1_000_000);
    check(
        checks,
        "alpha1_vs_prime_product",
        (alpha1 - product).abs() <= 1e-3,
        format!("alpha1 = {alpha1}, product oracle = {product}"),
    );

    let b2 = b_estimate(&scan.histogram, 2.0)?;
    let b2_half = b_estimate(&scan_half.histogram, 2.0)?;
    let drift = ((b2 - b2_half) / b2).abs();
    check(
        checks,
        "b_estimate_stability",
        drift <= 0.02,
        format!("B(2) at x: {b2}, at x/2: {b2_half}, relative drift {drift:e}"),
    );

    let mut decay_ok = true;
    for (&h, &count) in &scan.histogram.counts {
        if let Some(&next) = scan.histogram.counts.get(&(h + 1)) {
            if next > 100 && next >= count {
                decay_ok = false;
            }
        }
    }
    check(
        checks,
        "histogram_decay",
        decay_ok,
        "N_{h+1} < N_h wherever N_{h+1} > 100".to_string(),
    );
    Ok(MirskySection {
        alpha1_empirical: alpha1,
        alpha1_product_oracle: product,
        b2_at_x: b2,
        b2_at_half_x: b2_half,
        b2_relative_drift: drift,
    })
}

fn fit_stability<K: PartialEq>(
    rows: &[(K, CountReport)],
    base_keys: &[K],
    name: &str,
    checks: &mut Vec<Check>,
) -> FitStability {
    let refined_max = rows
        .iter()
        .map(|(_, r)| r.fitted_constant)
        .fold(0.0f64, f64::max);
    let base_max = rows
        .iter()
        .filter(|(k, _)| base_keys.contains(k))
        .map(|(_, r)| r.fitted_constant)
        .fold(0.0f64, f64::max);
    let drift = grids::refinement_drift(base_max, refined_max);
    check(
        checks,
        name,
        base_max.is_finite() && refined_max.is_finite() && base_max > 0.0 && drift <= 0.2,
        format!("base max {base_max}, refined max {refined_max}, drift {drift:.4}"),
    );
    FitStability {
        base_max,
        refined_max,
        relative_drift: drift,
    }
}

fn t_window_section(checks: &mut Vec<Check>) -> anyhow::Result<(Vec<TWindowRow>, FitStability)> {
    use rayon::prelude::*;
    let grid = grids::t_window_grid(true);
    let base = grids::t_window_grid(false);
    let primes = Primes::up_to(isqrt(10_000_000) + 1);
    let results: Vec<(u64, u64, u64, CountReport)> = grid
        .par_iter()
        .map(|&(x, h, p)| {
            let r = compute_t(x, h, p, &primes).expect("grid point in domain");
            (x, h, p, r)
        })
        .collect();
    let rows = results
        .iter()
        .map(|&(x, h, p, r)| TWindowRow {
            x,
            h,
            p,
            exact: r.exact,
            bound_value: r.bound_value,
            fitted_constant: r.fitted_constant,
        })
        .collect();
    let keyed: Vec<((u64, u64, u64), CountReport)> =
        results.into_iter().map(|(x, h, p, r)| ((x, h, p), r)).collect();
    let fit = fit_stability(&keyed, &base, "t_window_fit_stability", checks);
    Ok((rows, fit))
}

fn near_equal_section(
    checks: &mut Vec<Check>,
) -> anyhow::Result<(Vec<NearEqualRow>, FitStability)> {
    use rayon::prelude::*;
    let grid = grids::near_equal_grid(true);
    let base = grids::near_equal_grid(false);
    let primes = Primes::up_to(256);
    let results: Vec<((u64, u64, u64, u64, u64), CountReport)> = grid
        .par_iter()
        .map(|&(x, h, k, l, p)| {
            let r =
                count_near_equal_quadruples(x, h, k, l, p, &primes).expect("grid point in domain");
            ((x, h, k, l, p), r)
        })
        .collect();
    let rows = results
        .iter()
        .map(|&((x, h, k, l, p), r)| NearEqualRow {
            x,
            h,
            k,
            l,
            p,
            exact: r.exact,
            bound_value: r.bound_value,
            fitted_constant: r.fitted_constant,
        })
        .collect();
    let fit = fit_stability(&results, &base, "near_equal_fit_stability", checks);
    Ok((rows, fit))
}

fn close_points_section(
    checks: &mut Vec<Check>,
) -> anyhow::Result<(Vec<ClosePointRow>, FitStability)> {
    use rayon::prelude::*;
    let grid = grids::close_points_grid(true);
    let base = grids::close_points_grid(false);
    let results: Vec<((u32, u64, u64, u64), CountReport, ClosePointQuery)> = grid
        .par_iter()
        .map(|q| {
            let r = count_close_points(q).expect("grid point in domain");
            // Key on the delta ladder index via delta*q², exact by construction.
            let delta_key = (q.delta * (q.q_max * q.q_max) as f64 * 1e6).round() as u64;
            ((q.curve.k, q.m_max, q.q_max, delta_key), r, *q)
        })
        .collect();
    let base_keys: Vec<(u32, u64, u64, u64)> = base
        .iter()
        .map(|q| {
            let delta_key = (q.delta * (q.q_max * q.q_max) as f64 * 1e6).round() as u64;
            (q.curve.k, q.m_max, q.q_max, delta_key)
        })
        .collect();
    let rows = results
        .iter()
        .map(|(_, r, q)| ClosePointRow {
            curve_k: q.curve.k,
            m_max: q.m_max,
            q_max: q.q_max,
            delta: q.delta,
            exact: r.exact,
            bound_value: r.bound_value,
            fitted_constant: r.fitted_constant,
            delta_q2: q.delta_q2(),
            t: q.t(),
        })
        .collect();
    let keyed: Vec<((u32, u64, u64, u64), CountReport)> =
        results.into_iter().map(|(k, r, _)| (k, r)).collect();
    let fit = fit_stability(&keyed, &base_keys, "close_points_fit_stability", checks);
    Ok((rows, fit))
}

fn fractional_section() -> anyhow::Result<Vec<FractionalRow>> {
    let rows = grids::fractional_grid()
        .into_iter()
        .map(|q| {
            let r = count_r(&q)?;
            Ok(FractionalRow {
                n: q.n,
                m: q.m,
                delta: q.delta,
                exact: r.exact,
                bound_value: r.bound_value,
                fitted_constant: r.fitted_constant,
            })
        })
        .collect::<sqg_core::Result<_>>()?;
    Ok(rows)
}

fn sextuple_section(checks: &mut Vec<Check>) -> anyhow::Result<Vec<SextupleRow>> {
    let gamma = 3.5f64;
    let mut rows = Vec::new();
    let mut all_ok = true;
    for &(x, h, p) in &[(20_000u64, 40u64, 8u64), (30_000, 32, 8), (30_000, 16, 16)] {
        let params = derive_params(x, gamma, 1.0, h)?;
        let query = SextupleQuery {
            x,
            h,
            p,
            d: params.d,
            d_prime: params.d_prime,
        };
        let primes = oracles::oracle_primes(x, p);
        let counts = count_sextuples(&query, &primes)?;
        let report = count_s(&query, gamma, &primes)?;
        let oracle = oracles::sextuple_oracle(&query, &primes);
        let ok = counts.all == oracle;
        all_ok &= ok;
        rows.push(SextupleRow {
            x,
            h,
            p,
            d: params.d,
            d_prime: params.d_prime,
            gamma,
            exact: counts.all,
            exact_distinct_p: counts.distinct_p,
            bound_value: report.bound_value,
            fitted_constant: report.fitted_constant,
            oracle_ok: ok,
        });
    }
    check(
        checks,
        "sextuple_oracle_equivalence",
        all_ok,
        format!("{} fixed instances", rows.len()),
    );
    Ok(rows)
}

fn regime_section(checks: &mut Vec<Check>) -> anyhow::Result<Vec<RegimeSummary>> {
    let mut summaries = Vec::new();
    let mut covered_ok = true;
    for &gamma in &[3.0f64, 3.5, 3.7, 3.74] {
        for &x in &[100_000_000u64, 10_000_000_000] {
            let table = regime_table(x, gamma)?;
            covered_ok &= table.all_covered;
            summaries.push(RegimeSummary {
                gamma,
                x,
                all_covered: table.all_covered,
                uncovered: table.uncovered,
                rows: table.rows,
            });
        }
    }
    check(
        checks,
        "regime_full_coverage",
        covered_ok,
        "gamma in {3.0, 3.5, 3.7, 3.74}, x in {1e8, 1e10}".to_string(),
    );

    let beyond = regime_table(1 << 62, 3.76)?;
    check(
        checks,
        "regime_window_beyond_crossing",
        !beyond.all_covered,
        format!("gamma = 3.76, x = 2^62: uncovered H = {:?}", beyond.uncovered),
    );
    summaries.push(RegimeSummary {
        gamma: 3.76,
        x: 1 << 62,
        all_covered: beyond.all_covered,
        uncovered: beyond.uncovered,
        rows: beyond.rows,
    });
    Ok(summaries)
}

/// Seeded random instances for the oracle spot checks; the acceptance suite
/// reuses the same generators at larger volume.
pub mod instances {
    use rand::Rng;

    pub fn t_window(rng: &mut impl Rng) -> (u64, u64, u64) {
        let h = 1u64 << rng.gen_range(2..=7);
        let p = 1u64 << rng.gen_range(2..=5);
        let x = rng.gen_range((4 * h).max(4 * p * p)..=120_000);
        (x, h, p)
    }

    pub fn near_equal(rng: &mut impl Rng) -> (u64, u64, u64, u64, u64) {
        let h = 1u64 << rng.gen_range(4..=9);
        let k = 1u64 << rng.gen_range(0..=2);
        let l = 1u64 << rng.gen_range(0..=2);
        let p = 1u64 << rng.gen_range(2..=4);
        let x = rng.gen_range(2_000..=30_000);
        (x, h, k, l, p)
    }

    pub fn close_ratio(rng: &mut impl Rng) -> (u64, u64, u64, u64, u64, u64) {
        let h = 1u64 << rng.gen_range(4..=10);
        let k = 1u64 << rng.gen_range(0..=1);
        let l = 1u64 << rng.gen_range(0..=1);
        let p = 1u64 << rng.gen_range(2..=3);
        let v = rng.gen_range(1..=2);
        let x = rng.gen_range(1_000..=10_000);
        (x, h, k, l, p, v)
    }

    pub fn close_points(rng: &mut impl Rng) -> (u32, u64, u64, f64) {
        let k = rng.gen_range(1..=3);
        let m = rng.gen_range(2..=20);
        let q = rng.gen_range(2..=20);
        // One in five queries sits exactly on the curve-point special case.
        let delta = if rng.gen_range(0..5) == 0 {
            0.0
        } else {
            rng.gen_range(0.0..0.49)
        };
        (k, m, q, delta)
    }

    /// Dyadic deltas keep the integer and floating-point routes in exact
    /// agreement away from representation boundaries.
    pub fn fractional(rng: &mut impl Rng) -> (u64, u64, f64) {
        let n = rng.gen_range(10_000u64..1_000_000_000);
        let m = rng.gen_range(4u64..=2048);
        let delta = rng.gen_range(1u64..=1024) as f64 / 4096.0;
        (n, m, delta)
    }

    pub fn count_f(rng: &mut impl Rng) -> (u64, u64, f64) {
        let n = rng.gen_range(1u64..=100_000);
        let h = rng.gen_range(1u64..=512);
        let p_min = rng.gen_range(2u64..=50) as f64;
        (n, h, p_min)
    }

    /// `(x, h, p, d, d_prime)` for the sextuple count. Scales keep the cubic
    /// oracle below a few tens of millions of iterations; half the instances
    /// carry the derived gcd caps, half carry tight ones that actually bite.
    pub fn sextuple(rng: &mut impl Rng) -> (u64, u64, u64, f64, f64) {
        let p = 1u64 << rng.gen_range(2..=4);
        let x = if p == 4 {
            rng.gen_range(2_000..=8_000)
        } else {
            rng.gen_range(5_000..=30_000)
        };
        let h = 1u64 << rng.gen_range(3..=6);
        let (d, d_prime) = if rng.gen_bool(0.5) {
            let params =
                sqg_core::params::derive_params(x, 3.5, 1.0, h).expect("instance in domain");
            (params.d, params.d_prime)
        } else {
            let d = rng.gen_range(1.0..20.0);
            (d, rng.gen_range(d..40.0))
        };
        (x, h, p, d, d_prime)
    }
}

fn oracle_spot_checks(seed: u64, checks: &mut Vec<Check>) -> anyhow::Result<()> {
    const SPOT: usize = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));

    let mut ok = true;
    for _ in 0..SPOT {
        let (x, h, p) = instances::t_window(&mut rng);
        let primes = oracles::oracle_primes(x, p);
        ok &= compute_t(x, h, p, &primes)?.exact == oracles::t_window_oracle(x, h, p, &primes);
    }
    check(checks, "t_window_oracle_equivalence", ok, format!("{SPOT} seeded instances"));

    let mut ok = true;
    for _ in 0..SPOT {
        let (x, h, k, l, p) = instances::near_equal(&mut rng);
        let primes = oracles::oracle_primes(x, p);
        ok &= count_near_equal_quadruples(x, h, k, l, p, &primes)?.exact
            == oracles::near_equal_oracle(x, h, k, l, p, &primes);
    }
    check(checks, "near_equal_oracle_equivalence", ok, format!("{SPOT} seeded instances"));

    let mut ok = true;
    for _ in 0..SPOT {
        let (x, h, k, l, p, v) = instances::close_ratio(&mut rng);
        let primes = oracles::oracle_primes(x, p);
        ok &= sqg_core::window_counts::count_close_ratio_quadruples(x, h, k, l, p, v, &primes)?
            == oracles::close_ratio_oracle(x, h, k, l, p, v, &primes);
    }
    check(checks, "close_ratio_oracle_equivalence", ok, format!("{SPOT} seeded instances"));

    let mut ok = true;
    for _ in 0..SPOT {
        let (k, m, q, delta) = instances::close_points(&mut rng);
        let query = ClosePointQuery {
            curve: CurveSpec::new(k)?,
            m_max: m,
            q_max: q,
            delta,
        };
        ok &= count_close_points(&query)?.exact == oracles::close_points_oracle(&query);
    }
    check(checks, "close_points_oracle_equivalence", ok, format!("{SPOT} seeded instances"));

    let mut ok = true;
    for _ in 0..SPOT {
        let (n, m, delta) = instances::fractional(&mut rng);
        let query = FractionalQuery { n, m, delta };
        ok &= count_r(&query)?.exact == oracles::count_r_oracle(n, m, delta);
    }
    check(checks, "fractional_oracle_equivalence", ok, format!("{SPOT} seeded instances"));

    let mut ok = true;
    for _ in 0..SPOT {
        let (n, h, p_min) = instances::count_f(&mut rng);
        let primes = Primes::up_to(isqrt(n + h) + 1);
        ok &= sqg_core::window_counts::count_f(n, h, p_min, &primes)?
            == oracles::count_f_oracle(n, h, p_min, &primes);
    }
    check(checks, "count_f_oracle_equivalence", ok, format!("{SPOT} seeded instances"));
    Ok(())
}

fn hypothesis_checks(checks: &mut Vec<Check>) {
    let mut ok = true;
    for k in 1..=3 {
        ok &= check_hypotheses(&CurveSpec::new(k).expect("k in range"));
    }
    check(
        checks,
        "curve_hypotheses",
        ok,
        "k in {1, 2, 3}, d = 1, lambda = 1, C = 100".to_string(),
    );
}

fn min_inequality_checks(seed: u64, checks: &mut Vec<Check>) -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let trials = 10_000;
    let mut split_ok = true;
    let mut interp_ok = true;
    for _ in 0..trials {
        let a = rng.gen_range(0.0..1e3);
        let b = rng.gen_range(0.0..1e3);
        let c = rng.gen_range(0.0..1e3);
        let (u, v) = min_split(a, b, c)?;
        split_ok &= u + v >= a.min(b + c);
        let pa = rng.gen_range(1e-6..1e3);
        let pb = rng.gen_range(1e-6..1e3);
        let alpha = if rng.gen_bool(0.5) {
            0.4
        } else {
            rng.gen_range(0.0..=1.0)
        };
        interp_ok &= min_interpolate(pa, pb, alpha)? >= pa.min(pb);
    }
    check(
        checks,
        "min_split_inequality",
        split_ok,
        format!("{trials} random nonnegative triples"),
    );
    check(
        checks,
        "min_interpolate_inequality",
        interp_ok,
        format!("{trials} random positive pairs"),
    );
    Ok(())
}
