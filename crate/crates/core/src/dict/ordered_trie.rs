//! Path-compressed byte trie for the ALM schemes.
//!
//! Every node stores its full compressed segment, so a lookup never skips
//! bytes optimistically. A boundary may be a prefix of another: it then ends
//! at an inner node, which carries a payload of its own.

use std::collections::VecDeque;
use std::mem::size_of;

use super::{payloads, Hit, Payload};
use crate::axis::common_prefix_len;
use crate::error::{Error, Result};
use crate::model::Dictionary;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    seg_start: u32,
    seg_len: u32,
    /// Children occupy `first_child..first_child + child_count` in both
    /// `labels` and node ids.
    first_child: u32,
    child_count: u32,
    /// Index into `payloads` of the boundary ending here, or `NONE`.
    payload: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedTrieDict {
    nodes: Vec<Node>,
    /// First byte of each node's segment, indexed by node id.
    labels: Vec<u8>,
    segments: Vec<u8>,
    payloads: Vec<Payload>,
}

impl OrderedTrieDict {
    /// Accepts a dictionary of any scheme.
    pub fn build(dict: &Dictionary) -> Result<Self> {
        let entries = dict.entries();
        if entries.first().is_none_or(|e| !e.left_boundary.is_empty()) {
            return Err(Error::InvalidDictionary("first boundary must be empty".into()));
        }
        let all = payloads(dict)?;
        // Bare and terminated boundaries with equal bytes are query-equivalent;
        // keep the later one.
        let mut items: Vec<(&[u8], Payload)> = Vec::with_capacity(entries.len());
        for (e, &pl) in entries.iter().zip(&all) {
            let k = e.left_boundary.bytes.as_slice();
            match items.last_mut() {
                Some(last) if last.0 == k => last.1 = pl,
                _ => items.push((k, pl)),
            }
        }

        let mut trie = OrderedTrieDict {
            nodes: vec![Node {
                seg_start: 0,
                seg_len: 0,
                first_child: 0,
                child_count: 0,
                payload: NONE,
            }],
            labels: vec![0],
            segments: Vec::new(),
            payloads: Vec::with_capacity(items.len()),
        };
        // (node id, item range, depth where the node's segment starts).
        let mut queue = VecDeque::from([(0usize, 0..items.len(), 0usize)]);
        while let Some((id, range, depth)) = queue.pop_front() {
            let group = &items[range.clone()];
            let first = group[0].0;
            let last = group[group.len() - 1].0;
            let seg = common_prefix_len(&first[depth..], &last[depth..]);
            let end = depth + seg;
            let start = trie.segments.len();
            trie.segments.extend_from_slice(&first[depth..end]);

            let mut rest = range.start;
            let payload = if first.len() == end {
                rest += 1;
                trie.payloads.push(group[0].1);
                (trie.payloads.len() - 1) as u32
            } else {
                NONE
            };

            let mut children = Vec::new();
            while rest < range.end {
                let label = items[rest].0[end];
                let stop = rest + items[rest..range.end].partition_point(|(k, _)| k[end] == label);
                children.push((label, rest..stop));
                rest = stop;
            }
            let first_child = trie.nodes.len();
            for (label, child_range) in children.iter().cloned() {
                trie.nodes.push(Node {
                    seg_start: 0,
                    seg_len: 0,
                    first_child: 0,
                    child_count: 0,
                    payload: NONE,
                });
                trie.labels.push(label);
                queue.push_back((trie.nodes.len() - 1, child_range, end));
            }
            let too_big = || Error::InvalidDictionary("ordered trie exceeds 32-bit offsets".into());
            trie.nodes[id] = Node {
                seg_start: u32::try_from(start).map_err(|_| too_big())?,
                seg_len: seg as u32,
                first_child: u32::try_from(first_child).map_err(|_| too_big())?,
                child_count: children.len() as u32,
                payload,
            };
        }
        Ok(trie)
    }

    #[inline]
    fn segment(&self, node: &Node) -> &[u8] {
        &self.segments[node.seg_start as usize..(node.seg_start + node.seg_len) as usize]
    }

    #[inline]
    fn children(&self, node: &Node) -> std::ops::Range<usize> {
        node.first_child as usize..(node.first_child + node.child_count) as usize
    }

    /// Largest boundary in the subtree of `id`.
    fn rightmost(&self, mut id: usize) -> Payload {
        loop {
            let node = &self.nodes[id];
            if node.child_count == 0 {
                return self.payloads[node.payload as usize];
            }
            id = self.children(node).end - 1;
        }
    }

    /// Greatest boundary not above `query` (followed by the terminator).
    pub fn lookup(&self, query: &[u8]) -> Hit {
        let mut best: Option<Payload> = None;
        let mut id = 0;
        let mut pos = 0;
        loop {
            let node = &self.nodes[id];
            let seg = self.segment(node);
            let rest = &query[pos..];
            let common = common_prefix_len(seg, rest);
            if common < seg.len() {
                // Either the query ends inside the segment (every boundary
                // below is longer, hence larger) or the two diverge.
                if common < rest.len() && rest[common] > seg[common] {
                    best = Some(self.rightmost(id));
                }
                break;
            }
            pos += seg.len();
            if node.payload != NONE {
                best = Some(self.payloads[node.payload as usize]);
            }
            let Some(&c) = query.get(pos) else { break };
            let kids = self.children(node);
            let labels = &self.labels[kids.clone()];
            let idx = labels.partition_point(|&l| l < c);
            if idx > 0 {
                best = Some(self.rightmost(kids.start + idx - 1));
            }
            if idx < labels.len() && labels[idx] == c {
                id = kids.start + idx;
            } else {
                break;
            }
        }
        best.expect("the empty boundary covers every query").hit()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn memory_footprint(&self) -> usize {
        size_of::<Self>()
            + self.nodes.len() * size_of::<Node>()
            + self.labels.len()
            + self.segments.len()
            + self.payloads.len() * size_of::<Payload>()
    }
}
