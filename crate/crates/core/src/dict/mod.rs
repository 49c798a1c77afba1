//! Lookup structures answering "which interval contains this string".
//!
//! Each structure is built from a [`Dictionary`] and answers with the
//! containing interval's symbol length and code. A query is the remaining
//! source bytes, implicitly followed by the terminator.

mod array;
mod bitmap_trie;
mod ordered_trie;

pub use array::ArrayDict;
pub use bitmap_trie::BitmapTrieDict;
pub use ordered_trie::OrderedTrieDict;

use crate::error::{Error, Result};
use crate::model::{CodeWord, Dictionary, Scheme};

/// Result of a dictionary lookup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Hit {
    pub symbol_len: usize,
    pub code: CodeWord,
}

/// Per-entry payload shared by the trie structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Payload {
    code: CodeWord,
    symbol_len: u32,
}

impl Payload {
    fn hit(self) -> Hit {
        Hit {
            symbol_len: self.symbol_len as usize,
            code: self.code,
        }
    }
}

fn payloads(dict: &Dictionary) -> Result<Vec<Payload>> {
    dict.entries()
        .iter()
        .map(|e| {
            let symbol_len = u32::try_from(e.symbol_len)
                .map_err(|_| Error::InvalidDictionary(format!("symbol length {} too large", e.symbol_len)))?;
            Ok(Payload {
                code: e.code,
                symbol_len,
            })
        })
        .collect()
}

/// The structure a scheme encodes through.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DictStructure {
    Array(ArrayDict),
    BitmapTrie(BitmapTrieDict),
    OrderedTrie(OrderedTrieDict),
}

impl DictStructure {
    /// Fixed one- and two-byte layouts get an array and n-gram layouts a
    /// bitmap-trie. Everything else uses the ordered trie, as do array layouts
    /// whose codes are too wide for a slot.
    pub fn build(dict: &Dictionary) -> Result<Self> {
        if dict.is_empty() {
            return Err(Error::InvalidDictionary("no entries".into()));
        }
        match dict.scheme() {
            Scheme::SingleChar | Scheme::DoubleChar => match ArrayDict::build(dict) {
                Ok(a) => Ok(DictStructure::Array(a)),
                Err(Error::CodeTooWide { .. }) => {
                    OrderedTrieDict::build(dict).map(DictStructure::OrderedTrie)
                }
                Err(e) => Err(e),
            },
            Scheme::ThreeGrams | Scheme::FourGrams => {
                BitmapTrieDict::build(dict).map(DictStructure::BitmapTrie)
            }
            Scheme::Alm | Scheme::AlmImproved => OrderedTrieDict::build(dict).map(DictStructure::OrderedTrie),
        }
    }

    /// `query` must be non-empty.
    #[inline]
    pub fn lookup(&self, query: &[u8]) -> Hit {
        match self {
            DictStructure::Array(d) => d.lookup(query),
            DictStructure::BitmapTrie(d) => d.lookup(query),
            DictStructure::OrderedTrie(d) => d.lookup(query),
        }
    }

    /// Bytes owned by the structure, excluding build-time scratch.
    pub fn memory_footprint(&self) -> usize {
        match self {
            DictStructure::Array(d) => d.memory_footprint(),
            DictStructure::BitmapTrie(d) => d.memory_footprint(),
            DictStructure::OrderedTrie(d) => d.memory_footprint(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DictStructure::Array(_) => "array",
            DictStructure::BitmapTrie(_) => "bitmap-trie",
            DictStructure::OrderedTrie(_) => "ordered-trie",
        }
    }
}

#[cfg(test)]
pub(crate) mod test_util {
    use crate::assign::assign_fixed;
    use crate::model::{Alphabet, Dictionary, Scheme};
    use crate::select::{count_fixed, divide_ngrams_over};

    /// A fixed-code 3-gram dictionary over `alphabet`.
    pub fn trigram_dict(sample: &[&str], limit: usize, alphabet: Alphabet) -> Dictionary {
        let freq = count_fixed(sample, 3).unwrap();
        let div = divide_ngrams_over(&freq, 3, limit, alphabet).unwrap();
        let codes = assign_fixed(div.len());
        div.into_dictionary(Scheme::ThreeGrams, &codes)
    }

    /// Every string over `alphabet` of length 1..=max_len.
    pub fn all_strings(alphabet: Alphabet, max_len: usize) -> Vec<Vec<u8>> {
        let mut out: Vec<Vec<u8>> = Vec::new();
        let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for s in &frontier {
                for b in alphabet.min..=alphabet.max {
                    let mut t = s.clone();
                    t.push(b);
                    next.push(t);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}
