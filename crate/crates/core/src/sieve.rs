//! Segmented sieve of Eratosthenes over odd numbers, exact prime counting
//! and certified Chebyshev functions.
//!
//! Bit `i` of the table stands for the odd number `2i + 1`. Segments are
//! sieved independently (in parallel when rayon has threads) with the base
//! primes up to √limit, so construction needs only one segment of scratch
//! beyond the table itself. Every eighth word carries a cumulative count,
//! which makes π(x) a lookup plus at most eight popcounts.

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;

use crate::arith::{isqrt, product_u64};
use crate::error::{Error, Result};
use crate::exact::{log_enclosure, BigRational, Enclosure, GUARD_BITS};

/// Default number of odd entries per segment (2^18 bits = 32 KiB).
pub const DEFAULT_SEGMENT_ENTRIES: usize = 1 << 18;

const WORDS_PER_BLOCK: usize = 8;
/// Primes per block when summing logarithms for θ and ψ.
const LOG_CHUNK: usize = 256;

/// Immutable table of the primes up to `limit`.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    words: Vec<u64>,
    /// Odd primes strictly before each block of `WORDS_PER_BLOCK` words.
    cumulative: Vec<u64>,
}

/// Builds a table of all primes ≤ `limit` with the default segment size.
pub fn build_table(limit: u64) -> Result<PrimeTable> {
    PrimeTable::with_segment(limit, DEFAULT_SEGMENT_ENTRIES)
}

/// The primes in `[lo, hi]`, ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo > hi {
        return Err(Error::Usage(format!("empty range [{lo}, {hi}]")));
    }
    build_table(hi.max(2))?.primes_in_range(lo, hi)
}

/// π(x).
pub fn prime_count(x: u64) -> u64 {
    if x < 2 {
        return 0;
    }
    build_table(x).and_then(|t| t.prime_count(x)).expect("table covers x")
}

/// Enclosure of ϑ(x) = Σ_{p ≤ x} log p.
pub fn chebyshev_theta(x: u64, precision: u32) -> Result<Enclosure> {
    build_table(x.max(2))?.theta(x, precision)
}

/// Enclosure of ψ(x) = Σ_{p^k ≤ x} log p.
pub fn chebyshev_psi(x: u64, precision: u32) -> Result<Enclosure> {
    build_table(x.max(2))?.psi(x, precision)
}

fn simple_odd_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize + 1;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    let mut i = 3;
    while i < n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

fn sieve_segment(first_index: u64, chunk: &mut [u64], base: &[u64], entries: u64) {
    chunk.iter_mut().for_each(|w| *w = !0);
    let seg_len = chunk.len() as u64 * 64;
    let seg_end = (first_index + seg_len).min(entries);
    let lo_value = 2 * first_index + 1;
    for &p in base {
        let sq = p * p;
        if (sq - 1) / 2 >= seg_end {
            break;
        }
        let mut v = sq.max(lo_value.div_ceil(p) * p);
        if v % 2 == 0 {
            v += p;
        }
        let mut idx = (v - 1) / 2 - first_index;
        let stop = seg_end - first_index;
        while idx < stop {
            chunk[(idx / 64) as usize] &= !(1u64 << (idx % 64));
            idx += p;
        }
    }
    if first_index == 0 {
        // 1 is not prime.
        chunk[0] &= !1;
    }
    if seg_end < first_index + seg_len {
        for idx in (seg_end - first_index)..seg_len {
            chunk[(idx / 64) as usize] &= !(1u64 << (idx % 64));
        }
    }
}

impl PrimeTable {
    /// Builds the table with a custom segment size (in odd entries).
    pub fn with_segment(limit: u64, segment_entries: usize) -> Result<PrimeTable> {
        if limit < 2 {
            return Err(Error::Usage(format!("prime table limit must be at least 2, got {limit}")));
        }
        let entries = limit.div_ceil(2);
        let n_words = entries.div_ceil(64) as usize;
        let seg_words = (segment_entries / 64).max(1);
        let base = simple_odd_primes(isqrt(limit));
        let mut words = vec![0u64; n_words];
        words.par_chunks_mut(seg_words).enumerate().for_each(|(s, chunk)| {
            sieve_segment((s * seg_words * 64) as u64, chunk, &base, entries);
        });
        let mut cumulative = Vec::with_capacity(n_words / WORDS_PER_BLOCK + 1);
        let mut running = 0u64;
        for block in words.chunks(WORDS_PER_BLOCK) {
            cumulative.push(running);
            running += block.iter().map(|w| w.count_ones() as u64).sum::<u64>();
        }
        Ok(PrimeTable { limit, words, cumulative })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check(&self, x: u64) -> Result<()> {
        if x > self.limit {
            return Err(Error::OutOfRange(format!("{x} exceeds prime table limit {}", self.limit)));
        }
        Ok(())
    }

    /// Panics if `m` exceeds the table limit.
    pub fn is_prime(&self, m: u64) -> bool {
        assert!(m <= self.limit, "{m} exceeds prime table limit {}", self.limit);
        if m < 3 {
            return m == 2;
        }
        if m.is_multiple_of(2) {
            return false;
        }
        let i = (m - 1) / 2;
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Number of odd primes with bit index ≤ `i`.
    fn odd_count_through(&self, i: u64) -> u64 {
        let word = (i / 64) as usize;
        let block = word / WORDS_PER_BLOCK;
        let mut c = self.cumulative[block];
        for w in &self.words[block * WORDS_PER_BLOCK..word] {
            c += w.count_ones() as u64;
        }
        let bit = i % 64;
        let mask = if bit == 63 { !0 } else { (1u64 << (bit + 1)) - 1 };
        c + (self.words[word] & mask).count_ones() as u64
    }

    /// π(x) for x ≤ limit.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        self.check(x)?;
        if x < 2 {
            return Ok(0);
        }
        Ok(1 + self.odd_count_through((x - 1) / 2))
    }

    /// Number of primes in `[lo, hi]`.
    pub fn count_in_range(&self, lo: u64, hi: u64) -> Result<u64> {
        if lo > hi {
            return Ok(0);
        }
        let below = if lo == 0 { 0 } else { self.prime_count(lo - 1)? };
        Ok(self.prime_count(hi)? - below)
    }

    /// Iterator over the primes in `[lo, hi]`, ascending.
    pub fn iter_range(&self, lo: u64, hi: u64) -> Result<PrimeIter<'_>> {
        self.check(hi)?;
        Ok(PrimeIter::new(self, lo, hi))
    }

    /// The primes in `[lo, hi]`, ascending.
    pub fn primes_in_range(&self, lo: u64, hi: u64) -> Result<Vec<u64>> {
        if lo > hi {
            return Err(Error::Usage(format!("empty range [{lo}, {hi}]")));
        }
        Ok(self.iter_range(lo, hi)?.collect())
    }

    /// All primes in the table.
    pub fn primes(&self) -> PrimeIter<'_> {
        PrimeIter::new(self, 2, self.limit)
    }

    fn sum_logs<I: Iterator<Item = u64>>(&self, factors: I, precision: u32) -> Result<Enclosure> {
        let bits = precision as u64 + GUARD_BITS;
        let mut total = Enclosure::point(BigRational::zero());
        let factors: Vec<u64> = factors.collect();
        for chunk in factors.chunks(LOG_CHUNK) {
            let p: BigUint = product_u64(chunk.iter().copied());
            let l = log_enclosure(&BigRational::from_integer(BigInt::from(p)), precision)?;
            total = total.add(&l, bits);
        }
        Ok(total)
    }

    /// Enclosure of ϑ(x); requires x ≤ limit.
    pub fn theta(&self, x: u64, precision: u32) -> Result<Enclosure> {
        self.check(x)?;
        self.sum_logs(self.iter_range(2, x)?, precision)
    }

    /// Enclosure of ψ(x); requires x ≤ limit. Each prime p contributes
    /// ⌊log_p x⌋ copies of log p.
    pub fn psi(&self, x: u64, precision: u32) -> Result<Enclosure> {
        self.check(x)?;
        let powers = self.iter_range(2, x)?.map(|p| {
            let mut q = p;
            while let Some(next) = q.checked_mul(p).filter(|&v| v <= x) {
                q = next;
            }
            q
        });
        self.sum_logs(powers, precision)
    }
}

/// Ascending iterator over the primes of a [`PrimeTable`] within a range.
pub struct PrimeIter<'a> {
    table: &'a PrimeTable,
    pending_two: bool,
    index: u64,
    end_index: u64,
}

impl<'a> PrimeIter<'a> {
    fn new(table: &'a PrimeTable, lo: u64, hi: u64) -> Self {
        let pending_two = lo <= 2 && hi >= 2;
        let start = lo.max(3);
        let index = (start - 1) / 2 + u64::from(start.is_multiple_of(2));
        let end_index = if hi < 3 { 0 } else { (hi - 1) / 2 + 1 };
        PrimeIter {
            table,
            pending_two,
            index,
            end_index,
        }
    }
}

impl Iterator for PrimeIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pending_two {
            self.pending_two = false;
            return Some(2);
        }
        while self.index < self.end_index {
            let word_idx = (self.index / 64) as usize;
            let bit = self.index % 64;
            let w = self.table.words[word_idx] >> bit;
            if w == 0 {
                self.index = (word_idx as u64 + 1) * 64;
                continue;
            }
            let i = self.index + w.trailing_zeros() as u64;
            if i >= self.end_index {
                self.index = self.end_index;
                return None;
            }
            self.index = i + 1;
            return Some(2 * i + 1);
        }
        None
    }
}
