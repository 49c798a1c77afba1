//! Hu-Tucker optimal alphabetic codes.
//!
//! Phase 1 repeatedly combines the lightest compatible pair: two nodes with
//! no original leaf ("square") between them. Live nodes are split into
//! segments bounded by consecutive squares. Each segment keeps its merged
//! nodes ("circles") in an ordered set, so its best pair is always among its
//! two lightest circles and its two bounding squares. A lazy heap holds one
//! candidate per segment. When a square is combined, the segments on either
//! side of it fuse, smaller set into larger, which gives O(n log² n) overall.
//!
//! Phase 2 reads leaf depths off the combination tree. Phase 3 rebuilds an
//! alphabetic tree from those depths level by level and reads codes off it.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use ordered_float::OrderedFloat;

use super::CodeAssignment;
use crate::error::{Error, Result};
use crate::model::CodeWord;

type Weight = OrderedFloat<f64>;

struct Square {
    pos: usize,
    weight: Weight,
    left_seg: usize,
    right_seg: usize,
}

struct Segment {
    /// `(weight, position, node)`.
    circles: BTreeSet<(Weight, usize, usize)>,
    left: Option<usize>,
    right: Option<usize>,
    version: u64,
    alive: bool,
}

#[derive(Clone, Copy)]
enum Elem {
    Square(usize),
    Circle(Weight, usize, usize),
}

/// Candidate merge: (sum, left position, right position, segment, segment version).
type Candidate = (Weight, usize, usize, usize, u64);

struct Combiner {
    squares: Vec<Square>,
    segs: Vec<Segment>,
    /// Children of internal node `n + k`.
    children: Vec<[usize; 2]>,
    heap: BinaryHeap<Reverse<Candidate>>,
}

impl Combiner {
    fn new(weights: &[f64]) -> Self {
        let n = weights.len();
        let squares = (0..n)
            .map(|i| Square {
                pos: i,
                weight: OrderedFloat(weights[i]),
                left_seg: i,
                right_seg: i + 1,
            })
            .collect();
        let segs = (0..=n)
            .map(|s| Segment {
                circles: BTreeSet::new(),
                left: s.checked_sub(1),
                right: (s < n).then_some(s),
                version: 0,
                alive: true,
            })
            .collect();
        let mut c = Combiner {
            squares,
            segs,
            children: Vec::with_capacity(n.saturating_sub(1)),
            heap: BinaryHeap::new(),
        };
        for s in 0..=n {
            c.push_best(s);
        }
        c
    }

    fn key(&self, e: Elem) -> (Weight, usize) {
        match e {
            Elem::Square(q) => (self.squares[q].weight, self.squares[q].pos),
            Elem::Circle(w, p, _) => (w, p),
        }
    }

    fn node(&self, e: Elem) -> usize {
        match e {
            Elem::Square(q) => q,
            Elem::Circle(_, _, node) => node,
        }
    }

    /// Lightest pair in segment `s`, ordered by position.
    fn best_pair(&self, s: usize) -> Option<(Weight, Elem, Elem)> {
        let seg = &self.segs[s];
        let mut cands: Vec<Elem> = seg
            .circles
            .iter()
            .take(2)
            .map(|&(w, p, node)| Elem::Circle(w, p, node))
            .collect();
        cands.extend(seg.left.map(Elem::Square));
        cands.extend(seg.right.map(Elem::Square));
        if cands.len() < 2 {
            return None;
        }
        cands.sort_by_key(|&e| self.key(e));
        let (mut a, mut b) = (cands[0], cands[1]);
        if self.key(a).1 > self.key(b).1 {
            std::mem::swap(&mut a, &mut b);
        }
        Some((self.key(a).0 + self.key(b).0, a, b))
    }

    fn push_best(&mut self, s: usize) {
        if let Some((sum, a, b)) = self.best_pair(s) {
            let entry = (sum, self.key(a).1, self.key(b).1, s, self.segs[s].version);
            self.heap.push(Reverse(entry));
        }
    }

    /// Drops square `q` from the sequence, fusing its two segments. Returns
    /// the surviving segment.
    fn remove_square(&mut self, q: usize) -> usize {
        let (l, r) = (self.squares[q].left_seg, self.squares[q].right_seg);
        let (keep, drop) = if self.segs[l].circles.len() >= self.segs[r].circles.len() {
            (l, r)
        } else {
            (r, l)
        };
        let moved = std::mem::take(&mut self.segs[drop].circles);
        self.segs[keep].circles.extend(moved);
        let (left_sq, right_sq) = (self.segs[l].left, self.segs[r].right);
        self.segs[keep].left = left_sq;
        self.segs[keep].right = right_sq;
        self.segs[keep].version += 1;
        self.segs[drop].alive = false;
        if let Some(ls) = left_sq {
            self.squares[ls].right_seg = keep;
        }
        if let Some(rs) = right_sq {
            self.squares[rs].left_seg = keep;
        }
        keep
    }

    /// Runs phase 1 and returns the root node id.
    fn run(mut self) -> (Vec<[usize; 2]>, usize) {
        let n = self.squares.len();
        for _ in 1..n {
            let (s, sum, a, b) = loop {
                let Reverse((_, _, _, s, version)) =
                    self.heap.pop().expect("a compatible pair always exists");
                if self.segs[s].alive && self.segs[s].version == version {
                    let (sum, a, b) = self.best_pair(s).expect("candidate was recorded");
                    break (s, sum, a, b);
                }
            };
            let node = n + self.children.len();
            self.children.push([self.node(a), self.node(b)]);
            let pos = self.key(a).1;

            for e in [a, b] {
                if let Elem::Circle(w, p, nd) = e {
                    self.segs[s].circles.remove(&(w, p, nd));
                }
            }
            let mut seg = s;
            for e in [a, b] {
                if let Elem::Square(q) = e {
                    seg = self.remove_square(q);
                }
            }
            self.segs[seg].circles.insert((sum, pos, node));
            self.segs[seg].version += 1;
            self.push_best(seg);
        }
        let root = n + self.children.len() - 1;
        (self.children, root)
    }
}

/// Leaf depths of the Hu-Tucker combination tree (phases 1 and 2). A single
/// weight gets depth 1.
pub fn hu_tucker_depths(weights: &[f64]) -> Result<Vec<u32>> {
    let n = weights.len();
    if n == 0 {
        return Err(Error::InvalidConfig("no probabilities to assign codes to".into()));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidConfig(format!(
            "probability {w} is not a finite non-negative number"
        )));
    }
    if n == 1 {
        return Ok(vec![1]);
    }
    let (children, root) = Combiner::new(weights).run();
    let mut depths = vec![0u32; n];
    let mut stack = vec![(root, 0u32)];
    while let Some((node, d)) = stack.pop() {
        if node < n {
            depths[node] = d;
        } else {
            for child in children[node - n] {
                stack.push((child, d + 1));
            }
        }
    }
    Ok(depths)
}

/// Phase 3: pairs adjacent nodes from the deepest level upwards, then reads
/// each leaf's root path as its code.
fn codes_from_depths(depths: &[u32]) -> Vec<CodeWord> {
    let n = depths.len();
    if n == 1 {
        return vec![CodeWord::new(0, 1)];
    }
    let max = *depths.iter().max().unwrap();
    let mut leaves_at: Vec<Vec<usize>> = vec![Vec::new(); max as usize + 1];
    for (i, &d) in depths.iter().enumerate() {
        leaves_at[d as usize].push(i);
    }

    let mut children: Vec<[usize; 2]> = Vec::with_capacity(n - 1);
    // (leftmost leaf, node) in left-to-right order.
    let mut carried: Vec<(usize, usize)> = Vec::new();
    for d in (1..=max as usize).rev() {
        let leaves = &leaves_at[d];
        let mut level = Vec::with_capacity(carried.len() + leaves.len());
        let (mut i, mut j) = (0, 0);
        while i < carried.len() || j < leaves.len() {
            if j == leaves.len() || (i < carried.len() && carried[i].0 < leaves[j]) {
                level.push(carried[i]);
                i += 1;
            } else {
                level.push((leaves[j], leaves[j]));
                j += 1;
            }
        }
        assert!(level.len() % 2 == 0, "depths do not form a full alphabetic tree");
        carried = level
            .chunks(2)
            .map(|pair| {
                children.push([pair[0].1, pair[1].1]);
                (pair[0].0, n + children.len() - 1)
            })
            .collect();
    }
    assert_eq!(carried.len(), 1, "depths do not form a full alphabetic tree");

    let mut codes = vec![CodeWord::new(0, 1); n];
    let mut stack = vec![(carried[0].1, 0u64, 0u8)];
    while let Some((node, bits, len)) = stack.pop() {
        if node < n {
            codes[node] = CodeWord::new(bits, len);
        } else {
            let [l, r] = children[node - n];
            stack.push((r, (bits << 1) | 1, len + 1));
            stack.push((l, bits << 1, len + 1));
        }
    }
    codes
}

/// Canonical alphabetic codes for a depth sequence: each code is the
/// previous one plus one, shifted to the new length.
pub fn canonical_codes(depths: &[u32]) -> Vec<CodeWord> {
    let mut out = Vec::with_capacity(depths.len());
    let mut prev: Option<(u128, u32)> = None;
    for &d in depths {
        let bits = match prev {
            None => 0,
            Some((c, l)) if d >= l => (c + 1) << (d - l),
            Some((c, l)) => (c + 1) >> (l - d),
        };
        out.push(CodeWord::new(bits as u64, d as u8));
        prev = Some((bits, d));
    }
    out
}

/// Optimal order-preserving prefix code for `weights`. Ties are broken
/// towards the leftmost pair.
pub fn assign_hu_tucker(weights: &[f64]) -> Result<CodeAssignment> {
    let depths = hu_tucker_depths(weights)?;
    if let Some(&len) = depths.iter().find(|&&d| d > CodeWord::MAX_LEN as u32) {
        return Err(Error::CodeTooLong { len });
    }
    Ok(CodeAssignment::new(codes_from_depths(&depths)))
}
