use std::collections::{HashMap, HashSet};

use crate::axis::{self, fill_gap};
use crate::error::{Error, Result};
use crate::model::{Alphabet, BoundaryString, CodeWord, DictEntry, Dictionary, Scheme};
use crate::select::freq::FrequencyTable;
use crate::select::probe::probe_hits;
use crate::validate::{self, ValidationReport};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub left: BoundaryString,
    pub symbol_len: usize,
}

/// Consecutive intervals covering the string axis, before codes are known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalDivision {
    alphabet: Alphabet,
    intervals: Vec<Interval>,
}

impl IntervalDivision {
    pub fn new(alphabet: Alphabet, intervals: Vec<Interval>) -> Self {
        IntervalDivision { alphabet, intervals }
    }

    fn from_pairs(alphabet: Alphabet, mut pairs: Vec<(BoundaryString, usize)>) -> Self {
        // A query-free gap in front of the first interval is absorbed by
        // moving its boundary down to the axis start.
        if let Some(first) = pairs.first_mut() {
            first.0 = BoundaryString::empty();
        }
        let intervals = pairs
            .into_iter()
            .map(|(left, symbol_len)| Interval { left, symbol_len })
            .collect();
        IntervalDivision { alphabet, intervals }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Index of the interval containing `query` (implicitly terminated).
    pub fn find(&self, query: &[u8]) -> usize {
        self.intervals
            .partition_point(|iv| !iv.left.cmp_query(query).is_gt())
            .saturating_sub(1)
    }

    /// Bytes of the symbol consumed by interval `index`.
    pub fn symbol(&self, index: usize) -> Vec<u8> {
        let iv = &self.intervals[index];
        let mut first = axis::first_query(&iv.left, self.alphabet).unwrap_or_else(|| iv.left.bytes.clone());
        first.truncate(iv.symbol_len);
        first
    }

    /// Attaches codes, one per interval in order.
    pub fn into_dictionary(self, scheme: Scheme, codes: &[CodeWord]) -> Dictionary {
        assert_eq!(codes.len(), self.intervals.len(), "one code per interval");
        let entries = self
            .intervals
            .into_iter()
            .zip(codes)
            .map(|(iv, &code)| DictEntry {
                left_boundary: iv.left,
                symbol_len: iv.symbol_len,
                code,
            })
            .collect();
        Dictionary::with_alphabet(scheme, self.alphabet, entries)
    }

    /// Checks the boundary and symbol rules shared with [`Dictionary`].
    pub fn validate(&self) -> ValidationReport {
        let codes = crate::assign::assign_fixed(self.len().max(1));
        let dict = self.clone().into_dictionary(Scheme::Alm, &codes[..self.len()]);
        validate::validate_dictionary(&dict)
    }
}

/// Fixed-length intervals: one per byte (`gram_len` 1), or one per byte
/// pair plus a terminator gap per leading byte (`gram_len` 2).
pub fn divide_fixed(gram_len: usize) -> Result<IntervalDivision> {
    let mut intervals = Vec::new();
    match gram_len {
        1 => {
            for c in 0..=255u8 {
                let left = if c == 0 {
                    BoundaryString::empty()
                } else {
                    BoundaryString::bare([c])
                };
                intervals.push(Interval { left, symbol_len: 1 });
            }
        }
        2 => {
            intervals.reserve(256 * 257);
            for c in 0..=255u8 {
                let gap = if c == 0 {
                    BoundaryString::empty()
                } else {
                    BoundaryString::terminated([c])
                };
                intervals.push(Interval {
                    left: gap,
                    symbol_len: 1,
                });
                for d in 0..=255u8 {
                    intervals.push(Interval {
                        left: BoundaryString::bare([c, d]),
                        symbol_len: 2,
                    });
                }
            }
        }
        _ => {
            return Err(Error::InvalidConfig(format!(
                "fixed intervals need gram length 1 or 2, got {gram_len}"
            )))
        }
    }
    Ok(IntervalDivision::new(Alphabet::FULL, intervals))
}

/// Materializes each selected pattern `p` as `[p, successor(p))` and covers
/// the gaps. Patterns must be sorted; one that overlaps its predecessor is
/// dropped.
fn divide_around<'a>(selected: impl IntoIterator<Item = &'a [u8]>, alphabet: Alphabet) -> IntervalDivision {
    let mut out = Vec::new();
    let mut cursor = Some(BoundaryString::empty());
    for p in selected {
        let Some(cur) = cursor.take() else { break };
        let start = BoundaryString::bare(p);
        if start < cur {
            cursor = Some(cur);
            continue;
        }
        fill_gap(cur, Some(&start), alphabet, &mut out);
        out.push((start, p.len()));
        cursor = axis::successor(p, alphabet).map(BoundaryString::bare);
    }
    if let Some(cur) = cursor {
        fill_gap(cur, None, alphabet, &mut out);
    }
    IntervalDivision::from_pairs(alphabet, out)
}

/// Selects the `limit / 2` most frequent patterns of length `gram_len`
/// (count descending, then lexicographic) and fills the gaps around them.
///
/// Gaps spanning several leading bytes are split per byte, so the result has
/// at most `limit + 256` entries.
pub fn divide_ngrams(freq: &FrequencyTable, gram_len: usize, limit: usize) -> Result<IntervalDivision> {
    divide_ngrams_over(freq, gram_len, limit, Alphabet::FULL)
}

/// [`divide_ngrams`] on a reduced alphabet. Patterns must use only bytes of
/// `alphabet`.
pub fn divide_ngrams_over(
    freq: &FrequencyTable,
    gram_len: usize,
    limit: usize,
    alphabet: Alphabet,
) -> Result<IntervalDivision> {
    if limit < 4 || !limit.is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!(
            "n-gram dictionary limit must be even and at least 4, got {limit}"
        )));
    }
    let mut grams: Vec<(&[u8], u64)> = freq.iter().filter(|(p, _)| p.len() == gram_len).collect();
    if grams.is_empty() {
        return Err(Error::FrequencyTableEmpty);
    }
    let keep = (limit / 2).min(grams.len());
    let by_rank = |a: &(&[u8], u64), b: &(&[u8], u64)| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0));
    if keep < grams.len() {
        grams.select_nth_unstable_by(keep, by_rank);
        grams.truncate(keep);
    }
    let mut selected: Vec<&[u8]> = grams.into_iter().map(|(p, _)| p).collect();
    selected.sort_unstable();
    Ok(divide_around(selected, alphabet))
}

fn product(pattern: &[u8], count: u64) -> u64 {
    pattern.len() as u64 * count
}

/// Selects every pattern with `len x freq > threshold` and fills the gaps.
/// `freq` should be blended; patterns overlapping an earlier selection are
/// skipped.
pub fn divide_alm(freq: &FrequencyTable, threshold: u64) -> Result<IntervalDivision> {
    let mut selected: Vec<&[u8]> = freq
        .iter()
        .filter(|&(p, c)| product(p, c) > threshold)
        .map(|(p, _)| p)
        .collect();
    if selected.is_empty() {
        return Err(Error::NoPatternSelected { threshold });
    }
    selected.sort_unstable();
    Ok(divide_around(selected, Alphabet::FULL))
}

/// Bisects over the distinct `len x freq` products for the threshold whose
/// division is the largest one not exceeding `target_size`.
pub fn search_alm_threshold(freq: &FrequencyTable, target_size: usize) -> Result<u64> {
    if freq.is_empty() {
        return Err(Error::FrequencyTableEmpty);
    }
    let mut candidates: Vec<u64> = freq.iter().map(|(p, c)| product(p, c)).collect();
    candidates.push(0);
    candidates.sort_unstable();
    candidates.dedup();
    // The largest product selects nothing.
    candidates.pop();
    if candidates.is_empty() {
        candidates.push(0);
    }

    let size = |w: u64| divide_alm(freq, w).map(|d| d.len());
    let (mut lo, mut hi) = (0, candidates.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if size(candidates[mid])? <= target_size {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    match candidates.get(lo) {
        Some(&w) => Ok(w),
        None => Err(Error::TargetUnreachable {
            target: target_size,
            minimum: size(*candidates.last().unwrap())?,
        }),
    }
}

const EQUALIZE_ROUNDS: usize = 16;

/// Evens out `symbol_len x hits` across intervals.
///
/// Each round probes `sample` against the division, then splits every
/// interval whose product exceeds twice the median non-zero product around
/// its most frequent next byte: `[lo, s·b)`, `[s·b, succ(s·b))` and the rest.
/// Stops when nothing splits or another split would exceed `target_size`.
pub fn equalize<K: AsRef<[u8]>>(
    division: IntervalDivision,
    sample: &[K],
    target_size: usize,
) -> IntervalDivision {
    let alphabet = division.alphabet;
    let mut div = division;
    let mut frozen: HashSet<BoundaryString> = HashSet::new();

    for _ in 0..EQUALIZE_ROUNDS {
        if div.len() + 2 > target_size {
            break;
        }
        let hits = probe_hits(sample, &div);
        let products: Vec<u64> = hits
            .iter()
            .zip(&div.intervals)
            .map(|(&h, iv)| h * iv.symbol_len as u64)
            .collect();
        let mut nonzero: Vec<u64> = products.iter().copied().filter(|&p| p > 0).collect();
        if nonzero.is_empty() {
            break;
        }
        let mid = nonzero.len() / 2;
        let median = *nonzero.select_nth_unstable(mid).1;

        let mut candidates: Vec<usize> = (0..div.len())
            .filter(|&i| products[i] > 2 * median && !frozen.contains(&div.intervals[i].left))
            .collect();
        candidates.sort_by(|&a, &b| products[b].cmp(&products[a]).then(a.cmp(&b)));
        candidates.truncate((target_size - div.len()) / 2);
        if candidates.is_empty() {
            break;
        }

        let slot: HashMap<usize, usize> = candidates.iter().enumerate().map(|(s, &i)| (i, s)).collect();
        let mut next_bytes = vec![[0u32; 256]; candidates.len()];
        for key in sample {
            let key = key.as_ref();
            let mut pos = 0;
            while pos < key.len() {
                let i = div.find(&key[pos..]);
                let step = div.intervals[i].symbol_len.clamp(1, key.len() - pos);
                if let Some(&s) = slot.get(&i) {
                    if let Some(&b) = key.get(pos + step) {
                        next_bytes[s][b as usize] += 1;
                    }
                }
                pos += step;
            }
        }

        let mut splits: HashMap<usize, Vec<Interval>> = HashMap::new();
        for (s, &i) in candidates.iter().enumerate() {
            let hist = &next_bytes[s];
            let best = (0..256).max_by(|&a, &b| hist[a].cmp(&hist[b]).then(b.cmp(&a)));
            let pieces = match best {
                Some(b) if hist[b] > 0 => split_interval(&div, i, b as u8),
                _ => None,
            };
            match pieces {
                Some(p) => {
                    splits.insert(i, p);
                }
                None => {
                    frozen.insert(div.intervals[i].left.clone());
                }
            }
        }
        if splits.is_empty() {
            break;
        }
        let mut intervals = Vec::with_capacity(div.len() + 2 * splits.len());
        for (i, iv) in div.intervals.into_iter().enumerate() {
            match splits.remove(&i) {
                Some(pieces) => intervals.extend(pieces),
                None => intervals.push(iv),
            }
        }
        div = IntervalDivision::new(alphabet, intervals);
    }
    div
}

/// Splits interval `index` around the pattern `symbol·next`. `None` when the
/// split would not produce more than one non-empty piece.
fn split_interval(div: &IntervalDivision, index: usize, next: u8) -> Option<Vec<Interval>> {
    let alphabet = div.alphabet;
    let lo = &div.intervals[index].left;
    let hi = div.intervals.get(index + 1).map(|iv| &iv.left);
    let mut pattern = div.symbol(index);
    pattern.push(next);

    let start = BoundaryString::bare(pattern.as_slice()).max(lo.clone());
    let end = axis::successor(&pattern, alphabet).map(BoundaryString::bare);

    let mut points = vec![lo.clone()];
    for p in [Some(start), end].into_iter().flatten() {
        let below_hi = hi.is_none_or(|h| &p < h);
        if below_hi && &p > points.last().unwrap() {
            // Drop a cut whose preceding piece holds no query.
            if axis::contains_query(points.last().unwrap(), Some(&p), alphabet) {
                points.push(p);
            }
        }
    }
    if points.len() < 2 {
        return None;
    }
    let mut pieces = Vec::with_capacity(points.len());
    for (k, left) in points.iter().enumerate() {
        let right = points.get(k + 1).or(hi);
        let symbol_len = axis::interval_symbol_len(left, right, alphabet)?;
        if symbol_len == 0 {
            return None;
        }
        pieces.push(Interval {
            left: left.clone(),
            symbol_len,
        });
    }
    Some(pieces)
}
