//! Lempel-Ziv (LZ76) complexity of binary sequences and the normalized
//! complexity spectrum of scalar time series.
//!
//! A series is binarized against a threshold (`1` where the sample is >= the
//! threshold), parsed into its exhaustive production history, and the
//! component count `c(N)` is normalized as `c(N) log2(N) / N`. The spectrum
//! uses every sample of the series as its own threshold; its maximum is the
//! headline complexity value for a series.
//!
//! Normalized values are deliberately not clamped: for short sequences the
//! normalized complexity of random data can exceed 1.

use crate::error::{Error, Result};

/// A nonempty sequence over {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySequence {
    bits: Vec<u8>,
}

impl BinarySequence {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(i) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidParameter {
                name: "bit",
                value: bits[i] as f64,
                bound: "0 or 1",
            });
        }
        Ok(Self { bits })
    }

    pub fn from_bools(bools: impl IntoIterator<Item = bool>) -> Result<Self> {
        Self::new(bools.into_iter().map(u8::from).collect())
    }

    /// Parse a string of '0'/'1' characters (test and CLI convenience).
    pub fn from_str_bits(s: &str) -> Result<Self> {
        Self::new(
            s.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(Error::Config(format!("invalid bit character `{other}`"))),
                })
                .collect::<Result<Vec<u8>>>()?,
        )
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

fn validate_series(series: &[f64], min_len: usize) -> Result<()> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    if series.len() < min_len {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            min: min_len,
        });
    }
    for (index, &value) in series.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFiniteSample { index, value });
        }
    }
    Ok(())
}

/// Threshold encoding: bit i is 1 iff `series[i] >= threshold`.
pub fn binarize(series: &[f64], threshold: f64) -> Result<BinarySequence> {
    validate_series(series, 1)?;
    BinarySequence::new(series.iter().map(|&x| u8::from(x >= threshold)).collect())
}

/// LZ76 exhaustive-history component count `c(N)`.
///
/// The sequence is parsed left to right; each component is the shortest
/// extension that does not occur as a substring of everything before its last
/// symbol (self-overlapping copies allowed). A reproducible final remainder
/// counts as one component.
pub fn lz76_pattern_count(seq: &BinarySequence) -> usize {
    if seq.len() < INDEXED_MIN_LEN {
        lz76_scan(seq.bits())
    } else {
        Lz76Scratch::new().count(seq.bits())
    }
}

/// Normalized complexity `c(N) * log2(N) / N`. Requires N >= 2.
pub fn normalized_complexity(seq: &BinarySequence) -> Result<f64> {
    if seq.len() < 2 {
        return Err(Error::SeriesTooShort {
            len: seq.len(),
            min: 2,
        });
    }
    Ok(normalized_value(lz76_pattern_count(seq), seq.len()))
}

#[inline]
fn normalized_value(count: usize, n: usize) -> f64 {
    (count as f64) * (n as f64).log2() / (n as f64)
}

/// Single complexity value: binarize at the series mean, then normalize.
pub fn kc_single(series: &[f64]) -> Result<f64> {
    validate_series(series, 2)?;
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    normalized_complexity(&binarize(series, mean)?)
}

/// Per-threshold complexity spectrum of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexitySpectrum {
    /// The thresholds, i.e. the input samples in order.
    pub thresholds: Vec<f64>,
    /// Normalized complexity per threshold; same length as `thresholds`.
    pub values: Vec<f64>,
    /// Maximum of `values`.
    pub max_value: f64,
    /// First index attaining the maximum.
    pub max_index: usize,
}

/// The complexity spectrum: every sample of the series serves as a threshold,
/// duplicates included, so the spectrum always has the series length.
pub fn complexity_spectrum(series: &[f64]) -> Result<ComplexitySpectrum> {
    validate_series(series, 2)?;
    let mut scratch = SpectrumScratch::new();
    Ok(scratch.spectrum(series))
}

/// Affine rescale onto [0, 1] with both endpoints attained.
pub fn normalize_series(series: &[f64]) -> Result<Vec<f64>> {
    validate_series(series, 1)?;
    let min = series.iter().copied().fold(f64::INFINITY, f64::min);
    let max = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max <= min {
        return Err(Error::DegenerateRange);
    }
    let span = max - min;
    Ok(series.iter().map(|&x| (x - min) / span).collect())
}

/// Reusable buffers for repeated spectrum evaluation (one per sweep worker).
pub(crate) struct SpectrumScratch {
    lz: Lz76Scratch,
    bits: Vec<u8>,
}

impl SpectrumScratch {
    pub(crate) fn new() -> Self {
        Self {
            lz: Lz76Scratch::new(),
            bits: Vec::new(),
        }
    }

    /// Series must already be validated (finite, length >= 2).
    pub(crate) fn spectrum(&mut self, series: &[f64]) -> ComplexitySpectrum {
        let n = series.len();
        let SpectrumScratch { lz, bits } = self;
        let mut values = Vec::with_capacity(n);
        for k in 0..n {
            let threshold = series[k];
            bits.clear();
            bits.extend(series.iter().map(|&x| u8::from(x >= threshold)));
            let count = if n < INDEXED_MIN_LEN {
                lz76_scan(bits)
            } else {
                lz.count(bits)
            };
            values.push(normalized_value(count, n));
        }
        let (max_index, max_value) = values
            .iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            });
        ComplexitySpectrum {
            thresholds: series.to_vec(),
            values,
            max_value,
            max_index,
        }
    }
}

/// Below this length the plain scan is used; above it the gram-indexed parser.
const INDEXED_MIN_LEN: usize = 64;

/// Direct LZ76 parse by longest-previous-match maximization.
///
/// At component start `h` the innovation length is `1 + max_j lcp(j, h)` over
/// all earlier starts `j < h` (matches may overlap past `h`), capped by the
/// remaining length.
pub(crate) fn lz76_scan(bits: &[u8]) -> usize {
    let n = bits.len();
    let mut count = 0usize;
    let mut h = 0usize;
    while h < n {
        let remaining = n - h;
        let mut best = 0usize;
        for j in 0..h {
            let mut l = 0usize;
            while l < remaining && bits[j + l] == bits[h + l] {
                l += 1;
            }
            if l > best {
                best = l;
                if best >= remaining {
                    break;
                }
            }
        }
        count += 1;
        h += (best + 1).min(remaining);
    }
    count
}

const GRAM_BITS: usize = 9;
const GRAM2_BITS: usize = 5;

/// Gram-indexed LZ76 parser with bit-parallel match extension.
///
/// Candidate match starts are bucketed by their leading 9-bit gram (5-bit
/// fallback, then a bounded brute scan), which keeps the per-component
/// candidate list short on high-complexity sequences. Produces exactly the
/// same component count as [`lz76_scan`].
pub(crate) struct Lz76Scratch {
    packed: Vec<u64>,
    buckets9: Vec<Vec<u32>>,
    gen9: Vec<u32>,
    buckets5: Vec<Vec<u32>>,
    gen5: Vec<u32>,
    gen: u32,
}

impl Lz76Scratch {
    pub(crate) fn new() -> Self {
        Self {
            packed: Vec::new(),
            buckets9: vec![Vec::new(); 1 << GRAM_BITS],
            gen9: vec![0; 1 << GRAM_BITS],
            buckets5: vec![Vec::new(); 1 << GRAM2_BITS],
            gen5: vec![0; 1 << GRAM2_BITS],
            gen: 0,
        }
    }

    pub(crate) fn count(&mut self, bits: &[u8]) -> usize {
        let n = bits.len();
        if n < INDEXED_MIN_LEN {
            return lz76_scan(bits);
        }
        self.begin(bits);
        let mut count = 0usize;
        let mut h = 0usize;
        let mut inserted = 0usize;
        while h < n {
            while inserted < h {
                self.insert(inserted, n);
                inserted += 1;
            }
            let remaining = n - h;
            let mut best = 0usize;
            if h + GRAM_BITS <= n {
                let g = self.gram(h, GRAM_BITS);
                if self.gen9[g] == self.gen {
                    for idx in 0..self.buckets9[g].len() {
                        let j = self.buckets9[g][idx] as usize;
                        let l = GRAM_BITS
                            + self.extend(j + GRAM_BITS, h + GRAM_BITS, n - h - GRAM_BITS);
                        if l > best {
                            best = l;
                            if best >= remaining {
                                break;
                            }
                        }
                    }
                }
            }
            if best == 0 {
                best = self.fallback(h, n);
            }
            count += 1;
            h += (best + 1).min(remaining);
        }
        count
    }

    fn begin(&mut self, bits: &[u8]) {
        let words = (bits.len() + 63) >> 6;
        self.packed.clear();
        self.packed.resize(words, 0);
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                self.packed[i >> 6] |= 1u64 << (i & 63);
            }
        }
        if self.gen == u32::MAX {
            self.gen9.fill(0);
            self.gen5.fill(0);
            self.gen = 0;
        }
        self.gen += 1;
    }

    fn insert(&mut self, q: usize, n: usize) {
        if q + GRAM_BITS <= n {
            let g = self.gram(q, GRAM_BITS);
            if self.gen9[g] != self.gen {
                self.gen9[g] = self.gen;
                self.buckets9[g].clear();
            }
            self.buckets9[g].push(q as u32);
        }
        if q + GRAM2_BITS <= n {
            let g = self.gram(q, GRAM2_BITS);
            if self.gen5[g] != self.gen {
                self.gen5[g] = self.gen;
                self.buckets5[g].clear();
            }
            self.buckets5[g].push(q as u32);
        }
    }

    /// Exact best match length when no 9-gram candidate exists, i.e. the
    /// answer is < 9 or the sequence end is closer than 9 bits.
    fn fallback(&self, h: usize, n: usize) -> usize {
        let remaining = n - h;
        if h + GRAM2_BITS <= n {
            let g = self.gram(h, GRAM2_BITS);
            if self.gen5[g] == self.gen && !self.buckets5[g].is_empty() {
                let mut best = 0usize;
                for &j in &self.buckets5[g] {
                    let l = GRAM2_BITS
                        + self.extend(
                            j as usize + GRAM2_BITS,
                            h + GRAM2_BITS,
                            n - h - GRAM2_BITS,
                        );
                    if l > best {
                        best = l;
                        if best >= remaining {
                            break;
                        }
                    }
                }
                return best;
            }
        }
        // every earlier match is shorter than the fallback gram
        let cap = remaining.min(GRAM2_BITS - 1);
        let mut best = 0usize;
        for j in 0..h {
            let l = self.extend(j, h, cap);
            if l > best {
                best = l;
                if best >= cap {
                    break;
                }
            }
        }
        best
    }

    #[inline]
    fn gram(&self, pos: usize, width: usize) -> usize {
        (self.read64(pos) & ((1u64 << width) - 1)) as usize
    }

    /// 64 bits starting at bit offset `pos`; bits past the sequence end are 0.
    #[inline]
    fn read64(&self, pos: usize) -> u64 {
        let w = pos >> 6;
        let off = pos & 63;
        let lo = self.packed[w] >> off;
        if off == 0 {
            lo
        } else {
            let hi = if w + 1 < self.packed.len() {
                self.packed[w + 1]
            } else {
                0
            };
            lo | (hi << (64 - off))
        }
    }

    /// Length of the common run of `bits[a..]` and `bits[b..]`, at most `cap`.
    /// Requires `a < b` so that compared positions stay inside the sequence.
    #[inline]
    fn extend(&self, a: usize, b: usize, cap: usize) -> usize {
        let mut len = 0usize;
        while len < cap {
            let x = self.read64(a + len) ^ self.read64(b + len);
            let chunk = (cap - len).min(64);
            let mismatch = if x == 0 {
                64
            } else {
                x.trailing_zeros() as usize
            };
            if mismatch >= chunk {
                len += chunk;
            } else {
                return len + mismatch;
            }
        }
        len
    }
}
