//! Segmented squarefree sieve and the gap stream built on top of it.
//!
//! An integer is squarefree when no prime square divides it. The sieve works
//! in fixed-size segments: a [`SegmentBitmap`] holds one block of squarefree
//! flags, produced by striking multiples of `p²` for every prime
//! `p ≤ √(segment end)`. [`gap_stream`] stitches segments into an ordered
//! stream of consecutive-squarefree pairs ([`GapRecord`]), seeding the first
//! pair by sieving a short lookback window below the range start.
//!
//! [`is_squarefree`] is an independent trial-division oracle; it never
//! touches the sieve and exists so the two paths can be checked against each
//! other.

use crate::{domain, isqrt, Error, Result};
use serde::Serialize;

/// How far below a range start the seed search begins. The largest gap below
/// 10^18 is far smaller; the search doubles if the window somehow misses.
const LOOKBACK: u64 = 512;

/// A shared, read-only prime list up to a fixed limit.
#[derive(Debug, Clone)]
pub struct Primes {
    list: Vec<u64>,
    limit: u64,
}

impl Primes {
    /// All primes `p ≤ limit` by a classic sieve of Eratosthenes.
    pub fn up_to(limit: u64) -> Primes {
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        let mut list = Vec::new();
        let mut p = 2usize;
        while p <= n {
            if !composite[p] {
                list.push(p as u64);
                let mut m = p * p;
                while m <= n {
                    composite[m] = true;
                    m += p;
                }
            }
            p += 1;
        }
        Primes { list, limit }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.list
    }

    /// Primes in the dyadic block `[p, 2p)`.
    pub fn in_block(&self, p: u64) -> &[u64] {
        let lo = self.list.partition_point(|&q| q < p);
        let hi = self.list.partition_point(|&q| q < 2 * p);
        &self.list[lo..hi]
    }

    /// Primes `p` with `p ≥ min` (as a real-valued threshold).
    pub fn at_least(&self, min: f64) -> &[u64] {
        let lo = self.list.partition_point(|&q| (q as f64) < min);
        &self.list[lo..]
    }
}

/// Trial-division squarefree test: true iff no prime `p ≤ √n` has `p² | n`.
///
/// Deliberately reuses nothing from the sieve so it can serve as an
/// independent oracle for it.
pub fn is_squarefree(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(domain("is_squarefree: n must be >= 1"));
    }
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return Ok(false);
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    Ok(true)
}

/// One sieved block of squarefree flags with an absolute base offset.
///
/// Bit `i` is set iff `base + i` is squarefree. Bits are packed into 64-bit
/// words, least-significant bit first, which fixes the serialized layout of
/// [`SegmentBitmap::to_bytes`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentBitmap {
    base: u64,
    length: u32,
    words: Vec<u64>,
}

impl SegmentBitmap {
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn len(&self) -> u32 {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// Flag for the absolute integer `base + i`.
    pub fn bit(&self, i: u32) -> bool {
        assert!(i < self.length, "bit index {i} out of range");
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Absolute values of the squarefree integers in the segment, ascending.
    pub fn iter_squarefree(&self) -> impl Iterator<Item = u64> + '_ {
        let base = self.base;
        let length = self.length;
        (0..length).filter_map(move |i| {
            if self.words[(i / 64) as usize] >> (i % 64) & 1 == 1 {
                Some(base + i as u64)
            } else {
                None
            }
        })
    }

    /// Number of squarefree integers in the segment.
    pub fn count_squarefree(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Serializes as 8-byte little-endian base, 4-byte little-endian length,
    /// then `⌈length/64⌉` little-endian 64-bit words.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + 8 * self.words.len());
        out.extend_from_slice(&self.base.to_le_bytes());
        out.extend_from_slice(&self.length.to_le_bytes());
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    /// Inverse of [`SegmentBitmap::to_bytes`].
    pub fn from_bytes(bytes: &[u8]) -> Result<SegmentBitmap> {
        if bytes.len() < 12 {
            return Err(Error::Format("header shorter than 12 bytes".into()));
        }
        let base = u64::from_le_bytes(bytes[0..8].try_into().unwrap());
        let length = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if length == 0 || base == 0 {
            return Err(Error::Format("base and length must be >= 1".into()));
        }
        let n_words = (length as usize).div_ceil(64);
        if bytes.len() != 12 + 8 * n_words {
            return Err(Error::Format(format!(
                "expected {} payload words, got {} trailing bytes",
                n_words,
                bytes.len() - 12
            )));
        }
        let words = bytes[12..]
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(SegmentBitmap {
            base,
            length,
            words,
        })
    }
}

/// Sieves the block `[base, base + length)` of squarefree flags.
///
/// Marking strikes multiples of `p²` for each prime `p ≤ √(block end)`; the
/// prime list must reach that far.
pub fn sieve_segment(base: u64, length: u32, primes: &Primes) -> Result<SegmentBitmap> {
    if length == 0 {
        return Err(domain("sieve_segment: length must be >= 1"));
    }
    if base == 0 {
        return Err(domain("sieve_segment: base must be >= 1"));
    }
    let hi = base
        .checked_add(length as u64 - 1)
        .ok_or_else(|| domain("sieve_segment: segment end exceeds u64"))?;
    let root = isqrt(hi);
    if primes.limit() < root {
        return Err(domain(format!(
            "sieve_segment: prime list reaches {} but √{hi} = {root} is needed",
            primes.limit()
        )));
    }

    let n_words = (length as usize).div_ceil(64);
    let mut words = vec![u64::MAX; n_words];
    // Mask tail bits beyond `length` so popcounts stay honest.
    let tail = (length % 64) as u64;
    if tail != 0 {
        words[n_words - 1] = (1u64 << tail) - 1;
    }

    for &p in primes.as_slice() {
        if p > root {
            break;
        }
        let p2 = p * p;
        let mut m = base.div_ceil(p2) * p2;
        while m <= hi {
            let i = (m - base) as usize;
            words[i / 64] &= !(1u64 << (i % 64));
            m += p2;
        }
    }
    Ok(SegmentBitmap {
        base,
        length,
        words,
    })
}

/// A consecutive pair of squarefree integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapRecord {
    pub prev: u64,
    pub next: u64,
}

impl GapRecord {
    pub fn gap(&self) -> u64 {
        self.next - self.prev
    }
}

/// Largest squarefree integer `≤ x`, found by sieving a lookback window
/// below `x` and doubling it until a squarefree integer appears.
pub fn previous_squarefree(x: u64, primes: &Primes) -> Result<u64> {
    if x == 0 {
        return Err(domain("previous_squarefree: x must be >= 1"));
    }
    let mut window = LOOKBACK;
    loop {
        let lo = x.saturating_sub(window - 1).max(1);
        let seg = sieve_segment(lo, (x - lo + 1) as u32, primes)?;
        if let Some(s) = seg.iter_squarefree().last() {
            return Ok(s);
        }
        assert!(lo > 1, "no squarefree integer in [1, {x}]");
        window *= 2;
    }
}

/// Ordered stream of every [`GapRecord`] with `x_lo < next ≤ x_hi`.
///
/// Segments are sieved lazily in base order; the last squarefree integer of
/// each segment carries over as `prev` for the next. The record straddling
/// `x_lo` is resolved by [`previous_squarefree`].
pub struct GapStream<'a> {
    primes: &'a Primes,
    prev: u64,
    cursor: u64,
    x_hi: u64,
    segment_size: u32,
    segment: Option<SegmentBitmap>,
    bit: u32,
}

/// Builds a [`GapStream`] over `(x_lo, x_hi]`.
///
/// The prime list must cover `√x_hi`. `segment_size` only affects chunking,
/// never the records produced.
pub fn gap_stream<'a>(
    x_lo: u64,
    x_hi: u64,
    segment_size: u32,
    primes: &'a Primes,
) -> Result<GapStream<'a>> {
    if x_lo == 0 || x_lo >= x_hi {
        return Err(domain("gap_stream: need 1 <= x_lo < x_hi"));
    }
    if segment_size < 64 {
        return Err(domain("gap_stream: segment_size must be >= 64"));
    }
    let prev = previous_squarefree(x_lo, primes)?;
    Ok(GapStream {
        primes,
        prev,
        cursor: x_lo + 1,
        x_hi,
        segment_size,
        segment: None,
        bit: 0,
    })
}

impl GapStream<'_> {
    /// The seed: largest squarefree integer `≤ x_lo`, i.e. `prev` of the
    /// first record the stream will emit.
    pub fn first_prev(&self) -> u64 {
        self.prev
    }
}

impl Iterator for GapStream<'_> {
    type Item = GapRecord;

    fn next(&mut self) -> Option<GapRecord> {
        loop {
            if let Some(seg) = &self.segment {
                while self.bit < seg.len() {
                    let i = self.bit;
                    self.bit += 1;
                    if seg.bit(i) {
                        let next = seg.base() + i as u64;
                        let rec = GapRecord {
                            prev: self.prev,
                            next,
                        };
                        self.prev = next;
                        return Some(rec);
                    }
                }
                self.segment = None;
            }
            if self.cursor > self.x_hi {
                return None;
            }
            let len = (self.x_hi - self.cursor + 1).min(self.segment_size as u64) as u32;
            // The prime list was sized for x_hi, so this cannot fail.
            let seg = sieve_segment(self.cursor, len, self.primes).expect("segment within range");
            self.cursor += len as u64;
            self.bit = 0;
            self.segment = Some(seg);
        }
    }
}
