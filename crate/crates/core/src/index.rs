//! An ordered map keyed by encoded keys, standing in for a search tree that
//! stores compressed keys.

use std::collections::BTreeMap;

use crate::codec::Encoder;
use crate::error::{Error, Result};
use crate::model::EncodedKey;

/// A range result: the original key when kept, and the value.
pub type RangeEntry<'a, V> = (Option<&'a [u8]>, &'a V);

#[derive(Clone, Debug)]
struct Slot<V> {
    /// Original key, kept only to check results against a baseline.
    key: Option<Vec<u8>>,
    value: V,
}

/// Every operation encodes its key(s) first; the map only sees encodings.
#[derive(Clone, Debug)]
pub struct EncodedIndex<V> {
    encoder: Encoder,
    map: BTreeMap<EncodedKey, Slot<V>>,
    keep_keys: bool,
}

impl<V> EncodedIndex<V> {
    pub fn new(encoder: Encoder) -> Self {
        EncodedIndex {
            encoder,
            map: BTreeMap::new(),
            keep_keys: true,
        }
    }

    /// Whether original keys are stored next to values.
    pub fn keep_keys(mut self, keep: bool) -> Self {
        self.keep_keys = keep;
        self
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Returns the previous value stored under `key`.
    pub fn insert(&mut self, key: &[u8], value: V) -> Option<V> {
        let slot = Slot {
            key: self.keep_keys.then(|| key.to_vec()),
            value,
        };
        self.map.insert(self.encoder.encode(key), slot).map(|s| s.value)
    }

    pub fn get(&self, key: &[u8]) -> Option<&V> {
        self.map.get(&self.encoder.encode(key)).map(|s| &s.value)
    }

    /// Entries with `low <= key <= high` in key order. Both bounds are
    /// encoded together.
    pub fn range(&self, low: &[u8], high: &[u8]) -> Result<Vec<RangeEntry<'_, V>>> {
        if low > high {
            return Err(Error::OrderViolation { index: 1 });
        }
        let (lo, hi) = self.encoder.encode_pair(low, high)?;
        Ok(self
            .map
            .range(lo..=hi)
            .map(|(_, s)| (s.key.as_deref(), &s.value))
            .collect())
    }
}

/// Predicted fraction of point-query latency saved by compressing keys:
/// `1 - 1/cpr - (l * t_encode) / (h * t_trie)`, where `l` is the average key
/// length, `h` the tree height, `t_encode` the encoding cost per byte and
/// `t_trie` the cost per tree level. Negative values predict a slowdown.
pub fn estimate_latency_reduction(l: f64, h: f64, cpr: f64, t_encode: f64, t_trie: f64) -> f64 {
    1.0 - 1.0 / cpr - (l * t_encode) / (h * t_trie)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{build, SchemeConfig};
    use crate::Scheme;

    fn index(scheme: Scheme) -> EncodedIndex<u32> {
        let sample = ["a", "ab", "b", "apple", "banana", "cherry"];
        let built = build(&sample, &SchemeConfig::new(scheme).with_limit(64)).unwrap();
        EncodedIndex::new(built.encoder)
    }

    #[test]
    fn insert_get_overwrite() {
        let mut idx = index(Scheme::SingleChar);
        assert_eq!(idx.insert(b"k", 1), None);
        assert_eq!(idx.get(b"k"), Some(&1));
        assert_eq!(idx.insert(b"k", 2), Some(1));
        assert_eq!(idx.get(b"k"), Some(&2));
        assert_eq!(idx.get(b"missing"), None);
    }

    #[test]
    fn small_range() {
        for scheme in Scheme::ALL {
            let mut idx = index(scheme);
            assert!(idx.range(b"a", b"z").unwrap().is_empty());
            for (i, k) in [&b"a"[..], b"ab", b"b"].iter().enumerate() {
                idx.insert(k, i as u32);
            }
            let got: Vec<u32> = idx
                .range(b"a", b"ab")
                .unwrap()
                .into_iter()
                .map(|(_, v)| *v)
                .collect();
            assert_eq!(got, [0, 1], "{scheme}");
            assert!(idx.range(b"b", b"a").is_err());
        }
    }

    #[test]
    fn latency_model() {
        let r = estimate_latency_reduction(21.2, 18.2, 1.94, 6.9, 80.2);
        assert!((r - 0.38).abs() < 0.01, "{r}");
        assert_eq!(estimate_latency_reduction(10.0, 5.0, 1.0, 0.0, 3.0), 0.0);
        assert_eq!(estimate_latency_reduction(10.0, 4.0, 2.0, 1.0, 5.0), 0.0);
    }
}
