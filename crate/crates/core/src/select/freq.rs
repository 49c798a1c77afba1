use std::collections::HashMap;

use crate::error::{Error, Result};

/// Occurrence counts of byte patterns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: HashMap<Vec<u8>, u64>,
    total: u64,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `n` occurrences of `pattern`. Empty patterns and zero counts are
    /// ignored.
    pub fn add(&mut self, pattern: &[u8], n: u64) {
        if pattern.is_empty() || n == 0 {
            return;
        }
        if let Some(c) = self.counts.get_mut(pattern) {
            *c += n;
        } else {
            self.counts.insert(pattern.to_vec(), n);
        }
        self.total += n;
    }

    pub fn get(&self, pattern: &[u8]) -> u64 {
        self.counts.get(pattern).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total_count(&self) -> u64 {
        self.total
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Patterns in lexicographic order.
    pub fn sorted(&self) -> Vec<(&[u8], u64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// True when no stored pattern is a proper prefix of another.
    pub fn is_prefix_free(&self) -> bool {
        let sorted = self.sorted();
        sorted.windows(2).all(|w| !w[1].0.starts_with(w[0].0))
    }
}

impl<P: AsRef<[u8]>> FromIterator<(P, u64)> for FrequencyTable {
    fn from_iter<I: IntoIterator<Item = (P, u64)>>(iter: I) -> Self {
        let mut t = FrequencyTable::new();
        for (p, n) in iter {
            t.add(p.as_ref(), n);
        }
        t
    }
}

fn non_empty<K>(sample: &[K]) -> Result<()> {
    if sample.is_empty() {
        Err(Error::EmptySample)
    } else {
        Ok(())
    }
}

/// Counts every overlapping substring of exactly `gram_len` bytes. Keys
/// shorter than `gram_len` contribute nothing.
pub fn count_fixed<K: AsRef<[u8]>>(sample: &[K], gram_len: usize) -> Result<FrequencyTable> {
    non_empty(sample)?;
    if !(1..=4).contains(&gram_len) {
        return Err(Error::InvalidConfig(format!(
            "gram length {gram_len} not in 1..=4"
        )));
    }
    let mut t = FrequencyTable::new();
    for key in sample {
        for w in key.as_ref().windows(gram_len) {
            t.add(w, 1);
        }
    }
    Ok(t)
}

/// Counts the suffixes of each key of length `1..=min(len, max_len)`.
pub fn count_suffixes<K: AsRef<[u8]>>(sample: &[K], max_len: usize) -> Result<FrequencyTable> {
    non_empty(sample)?;
    if max_len == 0 {
        return Err(Error::InvalidConfig(
            "suffix length bound must be positive".into(),
        ));
    }
    let mut t = FrequencyTable::new();
    for key in sample {
        let key = key.as_ref();
        for len in 1..=key.len().min(max_len) {
            t.add(&key[key.len() - len..], 1);
        }
    }
    Ok(t)
}

/// Counts every substring of length `1..=max_len`.
pub fn count_all_substrings<K: AsRef<[u8]>>(sample: &[K], max_len: usize) -> Result<FrequencyTable> {
    non_empty(sample)?;
    if max_len == 0 {
        return Err(Error::InvalidConfig(
            "substring length bound must be positive".into(),
        ));
    }
    let mut t = FrequencyTable::new();
    for key in sample {
        let key = key.as_ref();
        for start in 0..key.len() {
            for end in start + 1..=key.len().min(start + max_len) {
                t.add(&key[start..end], 1);
            }
        }
    }
    Ok(t)
}

/// Moves the count of every pattern that prefixes another pattern onto its
/// longest extension (lexicographically smallest among equals), leaving a
/// prefix-free table with the same total count.
pub fn blend(freq: &FrequencyTable) -> FrequencyTable {
    let sorted = freq.sorted();
    let mut counts: Vec<u64> = sorted.iter().map(|&(_, c)| c).collect();
    let mut retained = vec![true; sorted.len()];

    // Extensions of sorted[i] form the contiguous run right after it. The
    // total scan length is bounded by (max pattern length) x (table size).
    for i in 0..sorted.len() {
        let prefix = sorted[i].0;
        let mut best: Option<usize> = None;
        let mut j = i + 1;
        while j < sorted.len() && sorted[j].0.starts_with(prefix) {
            if best.is_none_or(|b| sorted[j].0.len() > sorted[b].0.len()) {
                best = Some(j);
            }
            j += 1;
        }
        if let Some(b) = best {
            counts[b] += sorted[i].1;
            retained[i] = false;
        }
    }

    let mut out = FrequencyTable::new();
    for (i, &(p, _)) in sorted.iter().enumerate() {
        if retained[i] {
            out.add(p, counts[i]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(pairs: &[(&str, u64)]) -> FrequencyTable {
        pairs.iter().map(|&(p, n)| (p.as_bytes(), n)).collect()
    }

    #[test]
    fn fixed_counts() {
        let t = count_fixed(&["aa", "ab"], 1).unwrap();
        assert_eq!(t, table(&[("a", 3), ("b", 1)]));
        assert_eq!(t.total_count(), 4);
        assert_eq!(count_fixed(&["abc"], 2).unwrap(), table(&[("ab", 1), ("bc", 1)]));
        assert_eq!(
            count_fixed(&["ing", "ing", "ion"], 3).unwrap(),
            table(&[("ing", 2), ("ion", 1)])
        );
        assert_eq!(count_fixed(&["ab"], 3).unwrap().len(), 0);
    }

    #[test]
    fn suffix_counts() {
        assert_eq!(
            count_suffixes(&["abc"], 16).unwrap(),
            table(&[("c", 1), ("bc", 1), ("abc", 1)])
        );
        assert_eq!(count_suffixes(&["aa", "ba"], 1).unwrap(), table(&[("a", 2)]));
        assert_eq!(
            count_suffixes(&["mod", "od"], 16).unwrap(),
            table(&[("d", 2), ("od", 2), ("mod", 1)])
        );
    }

    #[test]
    fn substring_counts() {
        assert_eq!(
            count_all_substrings(&["ab"], 2).unwrap(),
            table(&[("a", 1), ("b", 1), ("ab", 1)])
        );
        assert_eq!(
            count_all_substrings(&["aaa"], 2).unwrap(),
            table(&[("a", 3), ("aa", 2)])
        );
        assert_eq!(
            count_all_substrings(&["xy", "yx"], 1).unwrap(),
            table(&[("x", 2), ("y", 2)])
        );
    }

    #[test]
    fn empty_sample_is_an_error() {
        let empty: [&str; 0] = [];
        assert!(matches!(count_fixed(&empty, 1), Err(Error::EmptySample)));
        assert!(matches!(count_suffixes(&empty, 4), Err(Error::EmptySample)));
        assert!(matches!(count_all_substrings(&empty, 4), Err(Error::EmptySample)));
    }

    #[test]
    fn blend_moves_prefix_counts_to_longest_extension() {
        assert_eq!(
            blend(&table(&[("cat", 5), ("catalog", 3)])),
            table(&[("catalog", 8)])
        );
        assert_eq!(blend(&table(&[("a", 1), ("b", 1)])), table(&[("a", 1), ("b", 1)]));
        assert_eq!(
            blend(&table(&[("a", 2), ("ab", 1), ("abc", 1)])),
            table(&[("abc", 4)])
        );
    }

    #[test]
    fn blend_ties_go_to_smallest_extension() {
        let out = blend(&table(&[("a", 4), ("abc", 1), ("abd", 1), ("ax", 1)]));
        assert_eq!(out, table(&[("abc", 5), ("abd", 1), ("ax", 1)]));
    }
}
