//! Gap histograms, moment sums, and the empirical estimators built on them.
//!
//! For the squarefree numbers `s_1 < s_2 < ...` we aggregate the gaps
//! `h = s_{k+1} − s_k` in two ways: a sparse histogram `h ↦ N_h(x)` counting
//! how often each gap length occurs up to `x`, and moment sums
//! `Σ (s_{k+1} − s_k)^γ` under compensated (Kahan–Neumaier) summation. From
//! these come the per-gap density estimate `N_h(x)/x`, the moment-constant
//! estimate `Σ_h h^γ N_h(x) / x`, and the half-range moment restricted to
//! `x/2 < s_{k+1} ≤ x`.
//!
//! [`scan_range`] drives the whole aggregation over a large interval,
//! sieving chunks in parallel and merging per-chunk partials in a fixed
//! order so results do not depend on thread count.

use crate::sieve::{gap_stream, GapRecord, Primes};
use crate::{domain, isqrt, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;

/// Aggregated gap counts up to the range endpoint `x`: `counts[h]` is the
/// number of records with `next ≤ x` and gap exactly `h`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GapHistogram {
    pub x: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl GapHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    fn add(&mut self, gap: u64) {
        *self.counts.entry(gap).or_insert(0) += 1;
    }

    fn merge(&mut self, other: &GapHistogram) {
        for (&h, &c) in &other.counts {
            *self.counts.entry(h).or_insert(0) += c;
        }
    }
}

/// `gap^gamma` with exact integer powers for integer `gamma ≤ 4` and
/// `exp(gamma·log gap)` otherwise, so results reproduce across platforms.
fn gap_power(gap: u64, gamma: f64) -> f64 {
    let g = gap as f64;
    if gamma.fract() == 0.0 && (0.0..=4.0).contains(&gamma) {
        g.powi(gamma as i32)
    } else {
        (gamma * g.ln()).exp()
    }
}

/// Compensated running sum of `gap^gamma` over a stream of records.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentAccumulator {
    pub gamma: f64,
    pub sum: f64,
    pub compensation: f64,
    pub count: u64,
}

impl MomentAccumulator {
    pub fn new(gamma: f64) -> Result<MomentAccumulator> {
        if !(gamma >= 0.0) {
            return Err(domain("moment accumulator: gamma must be >= 0"));
        }
        Ok(MomentAccumulator {
            gamma,
            sum: 0.0,
            compensation: 0.0,
            count: 0,
        })
    }

    fn add_term(&mut self, term: f64) {
        // Neumaier variant: the larger operand donates the rounding error.
        let s = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.compensation += (self.sum - s) + term;
        } else {
            self.compensation += (term - s) + self.sum;
        }
        self.sum = s;
    }

    pub fn push(&mut self, record: &GapRecord) {
        self.add_term(gap_power(record.gap(), self.gamma));
        self.count += 1;
    }

    /// Folds another accumulator in: sum of sums, sum of compensations,
    /// sum of counts. Associative up to the fixed merge order used by
    /// [`scan_range`].
    pub fn merge(&mut self, other: &MomentAccumulator) {
        self.add_term(other.sum);
        self.add_term(other.compensation);
        self.count += other.count;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Histogram of gap lengths over the given records.
pub fn histogram(gaps: &[GapRecord], x: u64) -> GapHistogram {
    let mut hist = GapHistogram {
        x,
        counts: BTreeMap::new(),
    };
    for r in gaps {
        hist.add(r.gap());
    }
    hist
}

/// Compensated `Σ gap^gamma` over the records.
pub fn moment_sum(gaps: &[GapRecord], gamma: f64) -> Result<f64> {
    let mut acc = MomentAccumulator::new(gamma)?;
    for r in gaps {
        acc.push(r);
    }
    Ok(acc.value())
}

/// Moment restricted to records with `x/2 < next ≤ x`.
pub fn half_range_moment(gaps: &[GapRecord], x: u64, gamma: f64) -> Result<f64> {
    if x < 4 {
        return Err(domain("half_range_moment: x must be >= 4"));
    }
    let mut acc = MomentAccumulator::new(gamma)?;
    for r in gaps {
        if 2 * (r.next as u128) > x as u128 && r.next <= x {
            acc.push(r);
        }
    }
    Ok(acc.value())
}

/// Empirical per-gap density `N_h(x)/x`; zero for gap lengths never seen.
pub fn alpha_estimate(hist: &GapHistogram, h: u64) -> f64 {
    let n = hist.counts.get(&h).copied().unwrap_or(0);
    n as f64 / hist.x as f64
}

/// Empirical moment constant `Σ_h h^gamma · N_h(x) / x`.
pub fn b_estimate(hist: &GapHistogram, gamma: f64) -> Result<f64> {
    let mut acc = MomentAccumulator::new(gamma)?;
    for (&h, &count) in &hist.counts {
        acc.add_term(gap_power(h, gamma) * count as f64);
    }
    Ok(acc.value() / hist.x as f64)
}

/// Everything one pass over `(x_lo, x_hi]` produces: the histogram, one
/// full-range and one half-range moment per requested `gamma`, the record
/// count, the squarefree count in the range, and the endpoints of the
/// squarefree sequence seen.
#[derive(Debug, Clone, Serialize)]
pub struct GapScan {
    pub x_lo: u64,
    pub x_hi: u64,
    pub histogram: GapHistogram,
    pub gammas: Vec<f64>,
    pub moments: Vec<MomentAccumulator>,
    pub half_moments: Vec<MomentAccumulator>,
    pub records: u64,
    /// Squarefree integers in `(x_lo, x_hi]`.
    pub squarefree: u64,
    pub first_prev: u64,
    pub last_squarefree: u64,
}

impl GapScan {
    pub fn moment(&self, i: usize) -> f64 {
        self.moments[i].value()
    }

    pub fn half_moment(&self, i: usize) -> f64 {
        self.half_moments[i].value()
    }
}

struct ChunkPartial {
    histogram: GapHistogram,
    moments: Vec<MomentAccumulator>,
    half_moments: Vec<MomentAccumulator>,
    records: u64,
    squarefree: u64,
    first_prev: u64,
    last_squarefree: u64,
}

/// Parallel aggregation over `(x_lo, x_hi]`.
///
/// The range splits into chunks on `segment_size` boundaries; chunk layout
/// depends only on the range and `segment_size`, and partials merge in chunk
/// order, so the result is identical for every thread count.
pub fn scan_range(x_lo: u64, x_hi: u64, segment_size: u32, gammas: &[f64]) -> Result<GapScan> {
    if x_lo == 0 || x_lo >= x_hi {
        return Err(domain("scan_range: need 1 <= x_lo < x_hi"));
    }
    if segment_size < 64 {
        return Err(domain("scan_range: segment_size must be >= 64"));
    }
    for &g in gammas {
        if !(g >= 0.0) {
            return Err(domain("scan_range: gamma must be >= 0"));
        }
    }
    let primes = Primes::up_to(isqrt(x_hi) + 1);

    // Chunks are a fixed multiple of the segment size so the split is
    // independent of the worker count.
    let chunk = (segment_size as u64).max(1 << 20).div_ceil(segment_size as u64)
        * segment_size as u64;
    let n_chunks = (x_hi - x_lo).div_ceil(chunk);
    let bounds: Vec<(u64, u64)> = (0..n_chunks)
        .map(|i| {
            let lo = x_lo + i * chunk;
            let hi = (lo + chunk).min(x_hi);
            (lo, hi)
        })
        .collect();

    let partials: Vec<Result<ChunkPartial>> = bounds
        .into_par_iter()
        .map(|(lo, hi)| scan_chunk(lo, hi, x_hi, segment_size, gammas, &primes))
        .collect();

    let mut iter = partials.into_iter();
    let mut total = iter.next().expect("at least one chunk")?;
    for p in iter {
        let p = p?;
        total.histogram.merge(&p.histogram);
        for (a, b) in total.moments.iter_mut().zip(&p.moments) {
            a.merge(b);
        }
        for (a, b) in total.half_moments.iter_mut().zip(&p.half_moments) {
            a.merge(b);
        }
        total.records += p.records;
        total.squarefree += p.squarefree;
        total.last_squarefree = p.last_squarefree.max(total.last_squarefree);
    }
    let mut histogram = total.histogram;
    histogram.x = x_hi;
    Ok(GapScan {
        x_lo,
        x_hi,
        histogram,
        gammas: gammas.to_vec(),
        moments: total.moments,
        half_moments: total.half_moments,
        records: total.records,
        squarefree: total.squarefree,
        first_prev: total.first_prev,
        last_squarefree: total.last_squarefree,
    })
}

fn scan_chunk(
    lo: u64,
    hi: u64,
    x_hi: u64,
    segment_size: u32,
    gammas: &[f64],
    primes: &Primes,
) -> Result<ChunkPartial> {
    let mut histogram = GapHistogram::default();
    let mut moments = gammas
        .iter()
        .map(|&g| MomentAccumulator::new(g))
        .collect::<Result<Vec<_>>>()?;
    let mut half_moments = moments.clone();
    let mut records = 0u64;
    let mut squarefree = 0u64;
    let mut last = 0u64;
    let stream = gap_stream(lo, hi, segment_size, primes)?;
    let first_prev = stream.first_prev();
    for rec in stream {
        histogram.add(rec.gap());
        for acc in moments.iter_mut() {
            acc.push(&rec);
        }
        if 2 * (rec.next as u128) > x_hi as u128 {
            for acc in half_moments.iter_mut() {
                acc.push(&rec);
            }
        }
        records += 1;
        squarefree += 1;
        last = rec.next;
    }
    Ok(ChunkPartial {
        histogram,
        moments,
        half_moments,
        records,
        squarefree,
        first_prev,
        last_squarefree: if last == 0 { first_prev } else { last },
    })
}

/// Number of squarefree integers in `[1, x]`.
pub fn squarefree_count(x: u64, segment_size: u32) -> Result<u64> {
    if x == 0 {
        return Err(domain("squarefree_count: x must be >= 1"));
    }
    if x == 1 {
        return Ok(1);
    }
    // 1 is squarefree and sits below the scanned range (1, x].
    Ok(scan_range(1, x, segment_size, &[])?.squarefree + 1)
}

/// Histogram rows as `h,count` CSV.
pub fn write_histogram_csv<W: Write>(hist: &GapHistogram, mut out: W) -> Result<()> {
    writeln!(out, "h,count")?;
    for (h, count) in &hist.counts {
        writeln!(out, "{h},{count}")?;
    }
    Ok(())
}

/// Moment rows as `gamma,x,sum,sum_over_x` CSV.
pub fn write_moments_csv<W: Write>(scan: &GapScan, mut out: W) -> Result<()> {
    writeln!(out, "gamma,x,sum,sum_over_x")?;
    for (i, &gamma) in scan.gammas.iter().enumerate() {
        let sum = scan.moment(i);
        writeln!(
            out,
            "{gamma},{x},{sum},{ratio}",
            x = scan.x_hi,
            ratio = sum / scan.x_hi as f64
        )?;
    }
    Ok(())
}
