//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured values. Run with
//! `cargo test -p sqg --test acceptance -- --nocapture`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sqg::oracles;
use sqg::report::instances;
use sqg::{grids, report};
use sqg_core::fractional::{count_r, regime_table, FractionalQuery};
use sqg_core::params::{min_interpolate, min_split};
use sqg_core::rational_points::{
    check_hypotheses, count_close_points, ClosePointQuery, CurveSpec,
};
use sqg_core::sieve::{is_squarefree, sieve_segment, Primes};
use sqg_core::stats::{alpha_estimate, b_estimate, scan_range, GapScan};
use sqg_core::window_counts::{
    compute_t, count_close_ratio_quadruples, count_near_equal_quadruples, count_sextuples,
    SextupleQuery,
};
use sqg_core::{isqrt, CountReport};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

const SCAN_X: u64 = 10_000_000;
const SCAN_GAMMAS: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 3.0, 3.5];

fn scan() -> &'static GapScan {
    static SCAN: OnceLock<GapScan> = OnceLock::new();
    SCAN.get_or_init(|| scan_range(1, SCAN_X, 1 << 16, &SCAN_GAMMAS).expect("scan to 1e7"))
}

fn scan_half() -> &'static GapScan {
    static SCAN: OnceLock<GapScan> = OnceLock::new();
    SCAN.get_or_init(|| scan_range(1, SCAN_X / 2, 1 << 16, &SCAN_GAMMAS).expect("scan to 5e6"))
}

fn gamma_index(g: f64) -> usize {
    SCAN_GAMMAS.iter().position(|&x| x == g).expect("gamma")
}

#[test]
fn criterion_01_sieve_matches_trial_division_to_a_million() {
    let start = Instant::now();
    let limit = 1_000_000u64;
    let primes = Primes::up_to(isqrt(limit) + 1);
    let mut n = 1u64;
    let mut checked = 0u64;
    while n <= limit {
        let len = (limit - n + 1).min(1 << 16) as u32;
        let seg = sieve_segment(n, len, &primes).unwrap();
        for i in 0..len {
            assert_eq!(
                seg.bit(i),
                is_squarefree(n + i as u64).unwrap(),
                "mismatch at {}",
                n + i as u64
            );
            checked += 1;
        }
        n += len as u64;
    }
    let elapsed = start.elapsed();
    assert_eq!(checked, limit);
    assert!(
        elapsed < Duration::from_secs(5),
        "single-threaded oracle comparison took {elapsed:?}"
    );
    println!("criterion 01 PASS: {checked} values agree, {elapsed:?} single-threaded");
}

#[test]
fn criterion_02_first_seven_squarefree_numbers() {
    let primes = Primes::up_to(8);
    let seg = sieve_segment(1, 16, &primes).unwrap();
    let first: Vec<u64> = seg.iter_squarefree().take(7).collect();
    assert_eq!(first, vec![1, 2, 3, 5, 6, 7, 10]);
    println!("criterion 02 PASS: first seven squarefree numbers are {first:?}");
}

#[test]
fn criterion_03_density_at_ten_million() {
    let q = scan().squarefree + 1;
    let density = q as f64 / SCAN_X as f64;
    let err = (density - 6.0 / (std::f64::consts::PI * std::f64::consts::PI)).abs();
    assert!(err <= 5e-4, "density error {err:e}");
    println!("criterion 03 PASS: Q(1e7) = {q}, |density - 6/pi^2| = {err:e} <= 5e-4");
}

#[test]
fn criterion_04_telescoping_identity() {
    for x in [1_000u64, 1_000_000, 10_000_000] {
        let (moment, last) = if x == SCAN_X {
            (scan().moment(gamma_index(1.0)), scan().last_squarefree)
        } else {
            let s = scan_range(1, x, 1 << 14, &[1.0]).unwrap();
            (s.moment(0), s.last_squarefree)
        };
        assert_eq!(moment, (last - 1) as f64, "x = {x}");
    }
    println!("criterion 04 PASS: gamma=1 moment telescopes exactly at x in {{1e3, 1e6, 1e7}}");
}

#[test]
fn criterion_05_rearrangement_identity() {
    let mut worst = 0.0f64;
    for g in [0.0, 0.5, 2.0, 3.5] {
        let direct = scan().moment(gamma_index(g));
        let via_hist = b_estimate(&scan().histogram, g).unwrap() * SCAN_X as f64;
        worst = worst.max(((direct - via_hist) / direct).abs());
    }
    assert!(worst <= 1e-9, "worst relative gap {worst:e}");
    println!("criterion 05 PASS: moment vs histogram route agree, worst relative gap {worst:e}");
}

#[test]
fn criterion_06_half_to_full_moment_ratio() {
    for (g, lo, hi) in [
        (0.0, 0.47, 0.53),
        (1.0, 0.47, 0.53),
        (2.0, 0.47, 0.53),
        (3.0, 0.47, 0.53),
        (3.5, 0.44, 0.56),
    ] {
        let i = gamma_index(g);
        let ratio = scan().half_moment(i) / scan().moment(i);
        assert!(
            (lo..=hi).contains(&ratio),
            "gamma = {g}: ratio {ratio} outside [{lo}, {hi}]"
        );
    }
    println!("criterion 06 PASS: half/full moment ratios inside their bands");
}

#[test]
fn criterion_07_moment_constant_stability() {
    let b_full = b_estimate(&scan().histogram, 2.0).unwrap();
    let b_half = b_estimate(&scan_half().histogram, 2.0).unwrap();
    let drift = ((b_full - b_half) / b_full).abs();
    assert!(drift <= 0.02, "drift {drift}");
    println!("criterion 07 PASS: B(2) drift between 5e6 and 1e7 is {drift:e} <= 0.02");
}

#[test]
fn criterion_08_adjacent_gap_density_vs_prime_product() {
    let alpha1 = alpha_estimate(&scan().histogram, 1);
    let product = report::adjacent_pair_density(1_000_000);
    let err = (alpha1 - product).abs();
    assert!(err <= 1e-3, "alpha1 {alpha1} vs product {product}");
    assert!((product - 0.3226).abs() < 5e-4);
    println!("criterion 08 PASS: alpha1 = {alpha1}, prime product = {product}, err = {err:e}");
}

#[test]
fn criterion_09_counting_oracle_equivalence() {
    let start = Instant::now();
    const TRIALS: usize = 50;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5149);
    for i in 0..TRIALS {
        let (x, h, p) = instances::t_window(&mut rng);
        let primes = oracles::oracle_primes(x, p);
        let fast = compute_t(x, h, p, &primes).unwrap().exact;
        let slow = oracles::t_window_oracle(x, h, p, &primes);
        assert_eq!(fast, slow, "t_window instance {i}: x={x} h={h} p={p}");
    }
    let t_window_done = Instant::now();

    // Fixed mid-size instance plus the randomized batch.
    {
        let params = sqg_core::params::derive_params(100_000, 3.5, 1.0, 32).unwrap();
        let query = SextupleQuery {
            x: 100_000,
            h: 32,
            p: 8,
            d: params.d,
            d_prime: params.d_prime,
        };
        let primes = oracles::oracle_primes(query.x, query.p);
        let fast = count_sextuples(&query, &primes).unwrap().all;
        let slow = oracles::sextuple_oracle(&query, &primes);
        assert_eq!(fast, slow, "fixed sextuple instance");
    }
    for i in 0..TRIALS {
        let (x, h, p, d, d_prime) = instances::sextuple(&mut rng);
        let query = SextupleQuery { x, h, p, d, d_prime };
        let primes = oracles::oracle_primes(x, p);
        let fast = count_sextuples(&query, &primes).unwrap().all;
        let slow = oracles::sextuple_oracle(&query, &primes);
        assert_eq!(fast, slow, "sextuple instance {i}: x={x} h={h} p={p}");
    }
    let sextuple_done = Instant::now();

    for i in 0..TRIALS {
        let (x, h, k, l, p) = instances::near_equal(&mut rng);
        let primes = oracles::oracle_primes(x, p);
        let fast = count_near_equal_quadruples(x, h, k, l, p, &primes).unwrap().exact;
        let slow = oracles::near_equal_oracle(x, h, k, l, p, &primes);
        assert_eq!(fast, slow, "near_equal instance {i}: x={x} h={h} k={k} l={l} p={p}");
    }
    let near_equal_done = Instant::now();

    for i in 0..TRIALS {
        let (x, h, k, l, p, v) = instances::close_ratio(&mut rng);
        let primes = oracles::oracle_primes(x, p);
        let fast = count_close_ratio_quadruples(x, h, k, l, p, v, &primes).unwrap();
        let slow = oracles::close_ratio_oracle(x, h, k, l, p, v, &primes);
        assert_eq!(fast, slow, "close_ratio instance {i}: x={x} h={h} k={k} l={l} p={p} v={v}");
    }
    let close_ratio_done = Instant::now();

    for i in 0..TRIALS {
        let (k, m, q, delta) = instances::close_points(&mut rng);
        let query = ClosePointQuery {
            curve: CurveSpec::new(k).unwrap(),
            m_max: m,
            q_max: q,
            delta,
        };
        let fast = count_close_points(&query).unwrap().exact;
        let slow = oracles::close_points_oracle(&query);
        assert_eq!(fast, slow, "close_points instance {i}: k={k} M={m} Q={q} delta={delta}");
    }
    let close_points_done = Instant::now();

    for i in 0..TRIALS {
        let (n, m, delta) = instances::fractional(&mut rng);
        let fast = count_r(&FractionalQuery { n, m, delta }).unwrap().exact;
        let slow = oracles::count_r_oracle(n, m, delta);
        assert_eq!(fast, slow, "fractional instance {i}: n={n} M={m} delta={delta}");
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed <= Duration::from_secs(300),
        "oracle suite took {elapsed:?}"
    );
    println!(
        "criterion 09 PASS: 6 counters x {TRIALS} randomized instances match exactly in {elapsed:?} \
         (t_window {:?}, sextuples {:?}, near_equal {:?}, close_ratio {:?}, close_points {:?})",
        t_window_done - start,
        sextuple_done - t_window_done,
        near_equal_done - sextuple_done,
        close_ratio_done - near_equal_done,
        close_points_done - close_ratio_done,
    );
}

#[test]
fn criterion_10_curve_hypotheses() {
    for k in 1..=3u32 {
        let curve = CurveSpec::new(k).unwrap();
        assert_eq!(curve.lambda, 1.0);
        assert_eq!(curve.c, 100.0);
        assert_eq!(curve.d, 1);
        assert!(check_hypotheses(&curve), "k = {k}");
    }
    println!("criterion 10 PASS: derivative and determinant hypotheses hold for k in {{1, 2, 3}}");
}

fn fit_max<K: PartialEq>(rows: &[(K, CountReport)], keys: &[K]) -> f64 {
    rows.iter()
        .filter(|(k, _)| keys.contains(k))
        .map(|(_, r)| r.fitted_constant)
        .fold(0.0f64, f64::max)
}

#[test]
fn criterion_11_bound_fit_finiteness_and_stability() {
    // Close points.
    let refined = grids::close_points_grid(true);
    let rows: Vec<((u32, u64, u64, u64), CountReport)> = refined
        .iter()
        .map(|q| {
            let key = (
                q.curve.k,
                q.m_max,
                q.q_max,
                (q.delta * (q.q_max * q.q_max) as f64 * 1e6).round() as u64,
            );
            (key, count_close_points(q).unwrap())
        })
        .collect();
    let base_keys: Vec<_> = grids::close_points_grid(false)
        .iter()
        .map(|q| {
            (
                q.curve.k,
                q.m_max,
                q.q_max,
                (q.delta * (q.q_max * q.q_max) as f64 * 1e6).round() as u64,
            )
        })
        .collect();
    let all_keys: Vec<_> = rows.iter().map(|(k, _)| *k).collect();
    let (cp_base, cp_refined) = (fit_max(&rows, &base_keys), fit_max(&rows, &all_keys));

    // Worst-window counts.
    let primes = Primes::up_to(isqrt(10_000_000) + 1);
    let rows: Vec<((u64, u64, u64), CountReport)> = grids::t_window_grid(true)
        .iter()
        .map(|&(x, h, p)| ((x, h, p), compute_t(x, h, p, &primes).unwrap()))
        .collect();
    let all_keys: Vec<_> = rows.iter().map(|(k, _)| *k).collect();
    let (t_base, t_refined) = (
        fit_max(&rows, &grids::t_window_grid(false)),
        fit_max(&rows, &all_keys),
    );

    // Near-equality quadruples.
    let primes = Primes::up_to(256);
    let rows: Vec<((u64, u64, u64, u64, u64), CountReport)> = grids::near_equal_grid(true)
        .iter()
        .map(|&(x, h, k, l, p)| {
            (
                (x, h, k, l, p),
                count_near_equal_quadruples(x, h, k, l, p, &primes).unwrap(),
            )
        })
        .collect();
    let all_keys: Vec<_> = rows.iter().map(|(k, _)| *k).collect();
    let (ne_base, ne_refined) = (
        fit_max(&rows, &grids::near_equal_grid(false)),
        fit_max(&rows, &all_keys),
    );

    for (name, base, refined) in [
        ("close_points", cp_base, cp_refined),
        ("t_window", t_base, t_refined),
        ("near_equal", ne_base, ne_refined),
    ] {
        assert!(
            base.is_finite() && refined.is_finite() && base > 0.0,
            "{name}: degenerate maxima {base} / {refined}"
        );
        let drift = grids::refinement_drift(base, refined);
        assert!(
            drift <= 0.2,
            "{name}: base {base}, refined {refined}, drift {drift}"
        );
    }
    println!(
        "criterion 11 PASS: fitted maxima finite and refinement-stable \
         (close_points {cp_base:.4}->{cp_refined:.4}, t_window {t_base:.4}->{t_refined:.4}, \
         near_equal {ne_base:.4}->{ne_refined:.4})"
    );
}

#[test]
fn criterion_12_regime_coverage() {
    for gamma in [3.0, 3.5, 3.7, 3.74] {
        for x in [100_000_000u64, 10_000_000_000] {
            let table = regime_table(x, gamma).unwrap();
            assert!(table.all_covered, "gamma={gamma} x={x}: {:?}", table.uncovered);
            assert!(!table.rows.is_empty());
        }
    }
    let beyond = regime_table(1 << 62, 3.76).unwrap();
    assert!(
        !beyond.all_covered,
        "expected an uncovered window at gamma = 3.76"
    );
    println!(
        "criterion 12 PASS: full coverage for gamma <= 3.74; gamma = 3.76 at x = 2^62 leaves H = {:?} uncovered",
        beyond.uncovered
    );
}

#[test]
fn criterion_13_min_inequalities() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(0x3113);
    const TRIALS: usize = 100_000;
    for _ in 0..TRIALS {
        let a = rng.gen_range(0.0..1e6);
        let b = rng.gen_range(0.0..1e6);
        let c = rng.gen_range(0.0..1e6);
        let (u, v) = min_split(a, b, c).unwrap();
        assert!(u + v >= a.min(b + c), "min_split({a}, {b}, {c})");
    }
    for _ in 0..TRIALS {
        let a = rng.gen_range(1e-9..1e6);
        let b = rng.gen_range(1e-9..1e6);
        let fixed = min_interpolate(a, b, 0.4).unwrap();
        assert!(fixed >= a.min(b), "min_interpolate({a}, {b}, 0.4)");
        let alpha = rng.gen_range(0.0..=1.0);
        let random = min_interpolate(a, b, alpha).unwrap();
        assert!(random >= a.min(b), "min_interpolate({a}, {b}, {alpha})");
    }
    println!("criterion 13 PASS: {TRIALS} triples and {TRIALS} pairs satisfy both inequalities exactly");
}

#[test]
fn criterion_14_report_determinism_and_runtime() {
    let dir = std::env::temp_dir();
    let out_a = dir.join("sqg-acceptance-report-a.json");
    let out_b = dir.join("sqg-acceptance-report-b.json");
    let run = |out: &std::path::Path, x: &str| {
        let start = Instant::now();
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_sqg"))
            .env_clear()
            .args([
                "report", "--x", x, "--seed", "42", "--threads", "2", "--segment-size", "65536",
                "--out",
            ])
            .arg(out)
            .status()
            .expect("spawn sqg report");
        (status, start.elapsed())
    };
    let (status_a, time_a) = run(&out_a, "1e6");
    let (status_b, time_b) = run(&out_b, "1e6");
    assert!(status_a.success() && status_b.success());
    let bytes_a = std::fs::read(&out_a).unwrap();
    let bytes_b = std::fs::read(&out_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "identical configs must produce identical bytes");

    // Default desk scale finishes comfortably inside its budget.
    let out_c = dir.join("sqg-acceptance-report-c.json");
    let (status_c, time_c) = run(&out_c, "1e7");
    assert!(status_c.success());
    assert!(
        time_c <= Duration::from_secs(600),
        "default-scale report took {time_c:?}"
    );
    for p in [&out_a, &out_b, &out_c] {
        let _ = std::fs::remove_file(p);
    }
    println!(
        "criterion 14 PASS: byte-identical reruns ({} bytes, {time_a:?} / {time_b:?}); \
         default scale ran in {time_c:?}",
        bytes_a.len()
    );
}
