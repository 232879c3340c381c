//! Argument surface and subcommand dispatch.
//!
//! Every flag can also come from the environment with an `SQG_` prefix
//! (`SQG_X`, `SQG_GAMMA`, ...). Count-valued flags accept scientific
//! notation (`--x 1e7`). Exit status: 0 on success, 1 when a report
//! invariant fails, 2 on usage errors.

use crate::output::{Cell, Table};
use crate::report;
use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use sqg_core::fractional::{count_r, regime_table, FractionalQuery};
use sqg_core::params::derive_params;
use sqg_core::rational_points::{count_close_points, ClosePointQuery, CurveSpec};
use sqg_core::sieve::{gap_stream, sieve_segment, Primes};
use sqg_core::stats::{alpha_estimate, scan_range};
use sqg_core::window_counts::{
    compute_t, count_close_ratio_quadruples, count_near_equal_quadruples, count_s,
    SextupleQuery,
};
use sqg_core::isqrt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

/// Parses a positive integer, also accepting scientific notation like 1e7.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| format!("`{s}` is not a nonnegative integer"))?;
    if !v.is_finite() || v < 0.0 || v > 9.0e18 {
        return Err(format!("`{s}` is out of range"));
    }
    if v.fract() != 0.0 {
        return Err(format!("`{s}` is not an integer"));
    }
    Ok(v as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "sqg",
    version,
    about = "Squarefree gap statistics and the counting experiments behind gap-moment bounds",
    after_help = "Environment variables with an SQG_ prefix override each flag (SQG_X, SQG_GAMMA, ...)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Range endpoint or experiment scale x (accepts 1e7 style)
    #[arg(long, global = true, env = "SQG_X", value_parser = parse_count)]
    pub x: Option<u64>,

    /// Range start (gap records with x_lo < next <= x are emitted)
    #[arg(long = "x-lo", global = true, env = "SQG_X_LO", value_parser = parse_count)]
    pub x_lo: Option<u64>,

    /// Comma-separated moment exponents in [0, 4]
    #[arg(long, global = true, env = "SQG_GAMMA", value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,

    /// Window height H
    #[arg(long = "H", global = true, env = "SQG_H", value_parser = parse_count)]
    pub h: Option<u64>,

    /// Dyadic prime block start P (primes in [P, 2P))
    #[arg(long = "P", global = true, env = "SQG_P", value_parser = parse_count)]
    pub p: Option<u64>,

    /// Dyadic level K
    #[arg(long = "K", global = true, env = "SQG_K", value_parser = parse_count)]
    pub k: Option<u64>,

    /// Dyadic level L
    #[arg(long = "L", global = true, env = "SQG_L", value_parser = parse_count)]
    pub l: Option<u64>,

    /// Closeness threshold delta
    #[arg(long, global = true, env = "SQG_DELTA")]
    pub delta: Option<f64>,

    /// Denominator bound M (rpoints) or interval start M (fractional)
    #[arg(long = "M", global = true, env = "SQG_M", value_parser = parse_count)]
    pub m: Option<u64>,

    /// Denominator bound Q
    #[arg(long = "Q", global = true, env = "SQG_Q", value_parser = parse_count)]
    pub q: Option<u64>,

    /// Curve offset k in {1, 2, 3}: the curve is sqrt(k + u)
    #[arg(long = "curve-k", global = true, env = "SQG_CURVE_K")]
    pub curve_k: Option<u32>,

    /// Sieve segment size (power of two, at least 64)
    #[arg(long = "segment-size", global = true, env = "SQG_SEGMENT_SIZE", value_parser = parse_count)]
    pub segment_size: Option<u64>,

    /// Worker threads
    #[arg(long, global = true, env = "SQG_THREADS")]
    pub threads: Option<usize>,

    /// Seed for the report's randomized oracle spot checks
    #[arg(long, global = true, env = "SQG_SEED", value_parser = parse_count)]
    pub seed: Option<u64>,

    /// Output format
    #[arg(long, global = true, env = "SQG_FORMAT", value_enum)]
    pub format: Option<Format>,

    /// Output path (stdout when omitted)
    #[arg(long, global = true, env = "SQG_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sieve [x-lo, x] and emit per-integer squarefree flags
    ///
    /// Columns: n,squarefree. With --dump, writes the binary segment layout
    /// (8-byte LE base, 4-byte LE length, packed 64-bit words) instead.
    Sieve {
        /// Write the binary segment dump instead of rows
        #[arg(long)]
        dump: bool,
    },
    /// List consecutive-squarefree gap records with x_lo < next <= x
    ///
    /// Columns: prev,next,gap.
    Gaps,
    /// Full- and half-range gap moments per gamma over (x_lo, x]
    ///
    /// Columns: gamma,x,sum,sum_over_x,half_sum,half_over_full.
    Moments,
    /// Gap histogram with per-gap density estimates
    ///
    /// Columns: h,count,alpha_hat.
    Mirsky,
    /// Window-count experiments at (x, H, P, K, L)
    ///
    /// Rows: the worst-window count T(H,P), the sextuple count S(H,P) with
    /// gcd caps from the derived parameters, the near-equality quadruple
    /// count, and the coprime close-ratio count (no bound applies to the
    /// last one). Columns: kind,x,h,p,k,l,exact,bound_value,fitted_constant.
    /// The sextuple bound uses the last --gamma entry.
    Counts,
    /// Rational points within delta of sqrt(curve-k + u)
    ///
    /// Columns: M,Q,delta,exact,bound_value,fitted_constant,delta_q2,t.
    Rpoints,
    /// Count m in [M, 2M] with x/m² within delta of an integer
    ///
    /// Columns: n,M,delta,exact,bound_value,fitted_constant.
    Fractional,
    /// Regime coverage of every dyadic gap scale H for one gamma
    ///
    /// Columns: h,covered_by (labels among bridge / large-h, pipe-joined).
    /// The coverage verdict is printed to stderr.
    Regimes,
    /// Full desk-scale experiment grid and hard invariants as one JSON
    /// document; exits 1 when any invariant fails
    Report,
}

impl Cli {
    fn gammas_or(&self, default: &[f64]) -> Vec<f64> {
        self.gamma.clone().unwrap_or_else(|| default.to_vec())
    }
}

fn validate_common(cli: &Cli) -> anyhow::Result<(u32, usize, u64)> {
    let segment_size = cli.segment_size.unwrap_or(1 << 16);
    if segment_size < 64 || !segment_size.is_power_of_two() || segment_size > u32::MAX as u64 {
        bail!("--segment-size must be a power of two in [64, 2^32)");
    }
    let threads = cli.threads.unwrap_or(4);
    if threads == 0 {
        bail!("--threads must be >= 1");
    }
    if let Some(gammas) = &cli.gamma {
        if gammas.is_empty() {
            bail!("--gamma needs at least one value");
        }
        for &g in gammas {
            if !(0.0..=4.0).contains(&g) {
                bail!("--gamma entries must lie in [0, 4], got {g}");
            }
        }
    }
    Ok((segment_size as u32, threads, cli.seed.unwrap_or(0)))
}

fn writer(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn emit(table: &Table, format: Format, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let mut w = writer(out)?;
    match format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => table.write_json(&mut w)?,
    }
    w.flush()?;
    Ok(())
}

/// Runs the parsed invocation; returns the process exit code.
pub fn execute(cli: Cli) -> anyhow::Result<i32> {
    let (segment_size, threads, seed) = validate_common(&cli)?;
    let format = cli.format.unwrap_or(Format::Csv);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building worker pool")?;
    pool.install(|| run_command(&cli, segment_size, seed, format))
}

fn run_command(cli: &Cli, segment_size: u32, seed: u64, format: Format) -> anyhow::Result<i32> {
    match &cli.command {
        Command::Sieve { dump } => {
            let x_lo = cli.x_lo.unwrap_or(1);
            let x = cli.x.unwrap_or(1000);
            if x_lo == 0 || x < x_lo {
                bail!("sieve needs 1 <= x-lo <= x");
            }
            let length = x - x_lo + 1;
            if length > u32::MAX as u64 {
                bail!("sieve range longer than 2^32 - 1");
            }
            let primes = Primes::up_to(isqrt(x) + 1);
            let seg = sieve_segment(x_lo, length as u32, &primes)?;
            if *dump {
                let mut w = writer(&cli.out)?;
                w.write_all(&seg.to_bytes())?;
                w.flush()?;
            } else {
                let mut table = Table::new(&["n", "squarefree"]);
                for i in 0..seg.len() {
                    table.push(vec![
                        (x_lo + i as u64).into(),
                        (seg.bit(i) as u64).into(),
                    ]);
                }
                emit(&table, format, &cli.out)?;
            }
            Ok(0)
        }
        Command::Gaps => {
            let x_lo = cli.x_lo.unwrap_or(1);
            let x = cli.x.unwrap_or(100);
            let primes = Primes::up_to(isqrt(x) + 1);
            let mut table = Table::new(&["prev", "next", "gap"]);
            for rec in gap_stream(x_lo, x, segment_size, &primes)? {
                table.push(vec![rec.prev.into(), rec.next.into(), rec.gap().into()]);
            }
            emit(&table, format, &cli.out)?;
            Ok(0)
        }
        Command::Moments => {
            let x_lo = cli.x_lo.unwrap_or(1);
            let x = cli.x.unwrap_or(10_000_000);
            let gammas = cli.gammas_or(&[0.0, 1.0, 2.0, 3.0, 3.5]);
            let scan = scan_range(x_lo, x, segment_size, &gammas)?;
            let mut table = Table::new(&[
                "gamma",
                "x",
                "sum",
                "sum_over_x",
                "half_sum",
                "half_over_full",
            ]);
            for (i, &gamma) in gammas.iter().enumerate() {
                let sum = scan.moment(i);
                let half = scan.half_moment(i);
                table.push(vec![
                    gamma.into(),
                    x.into(),
                    sum.into(),
                    (sum / x as f64).into(),
                    half.into(),
                    (half / sum).into(),
                ]);
            }
            emit(&table, format, &cli.out)?;
            Ok(0)
        }
        Command::Mirsky => {
            let x_lo = cli.x_lo.unwrap_or(1);
            let x = cli.x.unwrap_or(10_000_000);
            let scan = scan_range(x_lo, x, segment_size, &[])?;
            let mut table = Table::new(&["h", "count", "alpha_hat"]);
            for (&h, &count) in &scan.histogram.counts {
                table.push(vec![
                    h.into(),
                    count.into(),
                    alpha_estimate(&scan.histogram, h).into(),
                ]);
            }
            emit(&table, format, &cli.out)?;
            Ok(0)
        }
        Command::Counts => {
            let x = cli.x.unwrap_or(1_000_000);
            let h = cli.h.unwrap_or(64);
            let p = cli.p.unwrap_or(64);
            let k = cli.k.unwrap_or(1);
            let l = cli.l.unwrap_or(1);
            let gammas = cli.gammas_or(&[3.5]);
            let gamma = *gammas.last().expect("validated nonempty");
            if gamma < 3.0 {
                bail!("counts needs a gamma >= 3 (last --gamma entry) for the sextuple bound");
            }
            let params = derive_params(x, gamma, 1.0, h)?;
            let primes = Primes::up_to(isqrt(x).max(2 * p) + 1);
            let mut table = Table::new(&[
                "kind",
                "x",
                "h",
                "p",
                "k",
                "l",
                "exact",
                "bound_value",
                "fitted_constant",
            ]);
            let t = compute_t(x, h, p, &primes)?;
            table.push(vec![
                "t_window".into(),
                x.into(),
                h.into(),
                p.into(),
                k.into(),
                l.into(),
                t.exact.into(),
                t.bound_value.into(),
                t.fitted_constant.into(),
            ]);
            let s = count_s(
                &SextupleQuery {
                    x,
                    h,
                    p,
                    d: params.d,
                    d_prime: params.d_prime,
                },
                gamma,
                &primes,
            )?;
            table.push(vec![
                "sextuples".into(),
                x.into(),
                h.into(),
                p.into(),
                k.into(),
                l.into(),
                s.exact.into(),
                s.bound_value.into(),
                s.fitted_constant.into(),
            ]);
            let ne = count_near_equal_quadruples(x, h, k, l, p, &primes)?;
            table.push(vec![
                "near_equal".into(),
                x.into(),
                h.into(),
                p.into(),
                k.into(),
                l.into(),
                ne.exact.into(),
                ne.bound_value.into(),
                ne.fitted_constant.into(),
            ]);
            let cr = count_close_ratio_quadruples(x, h, k, l, p, 1, &primes)?;
            table.push(vec![
                "close_ratio".into(),
                x.into(),
                h.into(),
                p.into(),
                k.into(),
                l.into(),
                cr.into(),
                Cell::Empty(()),
                Cell::Empty(()),
            ]);
            emit(&table, format, &cli.out)?;
            Ok(0)
        }
        Command::Rpoints => {
            let curve = CurveSpec::new(cli.curve_k.unwrap_or(1))?;
            let query = ClosePointQuery {
                curve,
                m_max: cli.m.unwrap_or(16),
                q_max: cli.q.unwrap_or(16),
                delta: cli.delta.unwrap_or(0.1),
            };
            let r = count_close_points(&query)?;
            let mut table = Table::new(&[
                "M",
                "Q",
                "delta",
                "exact",
                "bound_value",
                "fitted_constant",
                "delta_q2",
                "t",
            ]);
            table.push(vec![
                query.m_max.into(),
                query.q_max.into(),
                query.delta.into(),
                r.exact.into(),
                r.bound_value.into(),
                r.fitted_constant.into(),
                query.delta_q2().into(),
                query.t().into(),
            ]);
            emit(&table, format, &cli.out)?;
            Ok(0)
        }
        Command::Fractional => {
            let query = FractionalQuery {
                n: cli.x.unwrap_or(1_000_003),
                m: cli.m.unwrap_or(64),
                delta: cli.delta.unwrap_or(0.1),
            };
            let r = count_r(&query)?;
            let mut table = Table::new(&[
                "n",
                "M",
                "delta",
                "exact",
                "bound_value",
                "fitted_constant",
            ]);
            table.push(vec![
                query.n.into(),
                query.m.into(),
                query.delta.into(),
                r.exact.into(),
                r.bound_value.into(),
                r.fitted_constant.into(),
            ]);
            emit(&table, format, &cli.out)?;
            Ok(0)
        }
        Command::Regimes => {
            let x = cli.x.unwrap_or(100_000_000);
            let gammas = cli.gammas_or(&[3.7]);
            if gammas.len() != 1 {
                bail!("regimes takes exactly one --gamma value");
            }
            let table_data = regime_table(x, gammas[0])?;
            let mut table = Table::new(&["h", "covered_by"]);
            for row in &table_data.rows {
                table.push(vec![row.h.into(), row.covered_by.join("|").into()]);
            }
            emit(&table, format, &cli.out)?;
            if table_data.all_covered {
                eprintln!("regime coverage: all H covered");
            } else {
                eprintln!(
                    "regime coverage: uncovered H = {:?}",
                    table_data.uncovered
                );
            }
            Ok(0)
        }
        Command::Report => {
            let x = cli.x.unwrap_or(10_000_000);
            let gammas = cli.gammas_or(&[0.0, 1.0, 2.0, 3.0, 3.5]);
            let threads = cli.threads.unwrap_or(4);
            let outcome = report::build_report(x, &gammas, segment_size, threads, seed)?;
            let mut w = writer(&cli.out)?;
            crate::output::write_json(&mut w, &outcome.doc)?;
            w.flush()?;
            if outcome.all_passed {
                Ok(0)
            } else {
                for c in outcome.doc.checks.iter().filter(|c| !c.pass) {
                    eprintln!("FAILED check {}: {}", c.name, c.detail);
                }
                Ok(1)
            }
        }
    }
}
