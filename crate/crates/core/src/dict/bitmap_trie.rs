//! Pointer-free bitmap trie for the n-gram schemes.
//!
//! Nodes are laid out breadth-first. Each has a 256-bit child bitmap and a
//! 32-bit header: the top bit flags a boundary ending at the node, the other
//! 31 bits count the set bits of all earlier nodes. The child with label `l`
//! sits in slot `counter + popcount(bits below l)`. Slots below
//! `node_count - 1` are nodes (node id = slot + 1). The rest are leaves, one
//! per full-length boundary, in boundary order.

use std::mem::size_of;

use super::{payloads, Hit, Payload};
use crate::error::{Error, Result};
use crate::model::{CodeWord, Dictionary, Scheme};

const TERMINATOR: u32 = 1 << 31;
const COUNTER: u32 = TERMINATOR - 1;

const NO_PAYLOAD: Payload = Payload {
    code: CodeWord::EMPTY,
    symbol_len: 0,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitmapTrieDict {
    headers: Vec<u32>,
    bitmaps: Vec<[u64; 4]>,
    /// Boundary ending at each node, valid where the header flag is set.
    terminators: Vec<Payload>,
    leaves: Vec<Payload>,
    /// Length of the longest boundary; nodes sit at depths `0..height`.
    height: usize,
}

#[inline]
fn has_bit(bitmap: &[u64; 4], label: u8) -> bool {
    bitmap[label as usize >> 6] >> (label & 63) & 1 == 1
}

#[inline]
fn rank_below(bitmap: &[u64; 4], label: u8) -> u32 {
    let word = label as usize >> 6;
    let mut n: u32 = bitmap[..word].iter().map(|w| w.count_ones()).sum();
    let bit = label & 63;
    if bit > 0 {
        n += (bitmap[word] << (64 - bit)).count_ones();
    }
    n
}

/// Largest set label strictly below `label`.
#[inline]
fn highest_below(bitmap: &[u64; 4], label: u8) -> Option<u8> {
    let word = label as usize >> 6;
    let bit = label & 63;
    let masked = if bit == 0 {
        0
    } else {
        bitmap[word] & (u64::MAX >> (64 - bit))
    };
    if masked != 0 {
        return Some((word as u32 * 64 + 63 - masked.leading_zeros()) as u8);
    }
    (0..word)
        .rev()
        .find(|&w| bitmap[w] != 0)
        .map(|w| (w as u32 * 64 + 63 - bitmap[w].leading_zeros()) as u8)
}

#[inline]
fn highest(bitmap: &[u64; 4]) -> Option<u8> {
    (0..4)
        .rev()
        .find(|&w| bitmap[w] != 0)
        .map(|w| (w as u32 * 64 + 63 - bitmap[w].leading_zeros()) as u8)
}

impl BitmapTrieDict {
    pub fn build(dict: &Dictionary) -> Result<Self> {
        if !matches!(dict.scheme(), Scheme::ThreeGrams | Scheme::FourGrams) {
            return Err(Error::SchemeMismatch {
                scheme: dict.scheme(),
                structure: "bitmap-trie",
            });
        }
        let entries = dict.entries();
        if entries.first().is_none_or(|e| !e.left_boundary.is_empty()) {
            return Err(Error::InvalidDictionary("first boundary must be empty".into()));
        }
        let payload = payloads(dict)?;
        let keys: Vec<&[u8]> = entries.iter().map(|e| e.left_boundary.bytes.as_slice()).collect();
        let height = keys.iter().map(|k| k.len()).max().unwrap_or(0);

        // Distinct prefixes per depth, in order; the node at depth d with
        // rank r has id offsets[d] + r.
        let mut levels: Vec<Vec<&[u8]>> = vec![Vec::new(); height.max(1)];
        for k in &keys {
            for (d, level) in levels.iter_mut().enumerate() {
                if k.len() < d {
                    break;
                }
                let p = &k[..d];
                if level.last() != Some(&p) {
                    level.push(p);
                }
            }
        }
        let mut offsets = Vec::with_capacity(levels.len());
        let mut node_count = 0usize;
        for level in &levels {
            offsets.push(node_count);
            node_count += level.len();
        }
        if node_count > COUNTER as usize {
            return Err(Error::InvalidDictionary("too many trie nodes".into()));
        }

        let mut bitmaps = vec![[0u64; 4]; node_count];
        let mut terminators = vec![NO_PAYLOAD; node_count];
        let mut flags = vec![false; node_count];
        let mut leaves = Vec::new();
        let node_of = |d: usize, p: &[u8]| -> usize {
            offsets[d] + levels[d].binary_search(&p).expect("prefix was collected")
        };
        for (k, &pl) in keys.iter().zip(&payload) {
            if k.len() < height || height == 0 {
                let id = node_of(k.len(), k);
                // A later boundary at the same node is query-equivalent and wins.
                terminators[id] = pl;
                flags[id] = true;
            } else {
                leaves.push((*k, pl));
            }
            for d in 0..k.len().min(height) {
                let id = node_of(d, &k[..d]);
                let label = k[d];
                bitmaps[id][label as usize >> 6] |= 1 << (label & 63);
            }
        }
        // Equal full-length boundaries (bare and terminated) share a leaf; the
        // later one wins.
        let mut deduped: Vec<(&[u8], Payload)> = Vec::with_capacity(leaves.len());
        for (k, pl) in leaves {
            match deduped.last_mut() {
                Some(last) if last.0 == k => last.1 = pl,
                _ => deduped.push((k, pl)),
            }
        }
        let leaves: Vec<Payload> = deduped.into_iter().map(|(_, pl)| pl).collect();

        let mut headers = Vec::with_capacity(node_count);
        let mut counter = 0u32;
        for (bm, &flag) in bitmaps.iter().zip(&flags) {
            headers.push(counter | if flag { TERMINATOR } else { 0 });
            counter += bm.iter().map(|w| w.count_ones()).sum::<u32>();
        }
        debug_assert_eq!(counter as usize, node_count - 1 + leaves.len());

        Ok(BitmapTrieDict {
            headers,
            bitmaps,
            terminators,
            leaves,
            height,
        })
    }

    #[inline]
    fn terminator(&self, node: usize) -> Option<Payload> {
        (self.headers[node] & TERMINATOR != 0).then(|| self.terminators[node])
    }

    /// Slot of the child of `node` labelled `label`.
    #[inline]
    fn child_slot(&self, node: usize, label: u8) -> usize {
        ((self.headers[node] & COUNTER) + rank_below(&self.bitmaps[node], label)) as usize
    }

    /// Largest boundary in the subtree under child `label` of `node`.
    fn rightmost_child(&self, mut node: usize, mut depth: usize, mut label: u8) -> Payload {
        loop {
            let slot = self.child_slot(node, label);
            if depth + 1 == self.height {
                return self.leaves[slot - (self.headers.len() - 1)];
            }
            node = slot + 1;
            depth += 1;
            match highest(&self.bitmaps[node]) {
                Some(l) => label = l,
                None => return self.terminator(node).expect("childless node ends a boundary"),
            }
        }
    }

    /// Greatest boundary not above `query` (followed by the terminator).
    pub fn lookup(&self, query: &[u8]) -> Hit {
        let mut best = None;
        let mut node = 0;
        let mut depth = 0;
        loop {
            if let Some(t) = self.terminator(node) {
                best = Some(t);
            }
            let Some(&c) = query.get(depth) else { break };
            let bitmap = &self.bitmaps[node];
            if let Some(l) = highest_below(bitmap, c) {
                best = Some(self.rightmost_child(node, depth, l));
            }
            if !has_bit(bitmap, c) {
                break;
            }
            let slot = self.child_slot(node, c);
            if depth + 1 == self.height {
                best = Some(self.leaves[slot - (self.headers.len() - 1)]);
                break;
            }
            node = slot + 1;
            depth += 1;
        }
        best.expect("the empty boundary covers every query").hit()
    }

    pub fn node_count(&self) -> usize {
        self.headers.len()
    }

    /// 36 bytes per node plus the payload arrays.
    pub fn memory_footprint(&self) -> usize {
        size_of::<Self>()
            + self.headers.len() * (size_of::<u32>() + size_of::<[u64; 4]>())
            + (self.terminators.len() + self.leaves.len()) * size_of::<Payload>()
    }
}
