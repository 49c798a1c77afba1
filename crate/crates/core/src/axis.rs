//! String-axis arithmetic.
//!
//! A lookup query is a non-empty byte string followed by the terminator, so
//! the set of queries inside `[lo, hi)` is what decides an interval's symbol.
//! `None` as an upper bound stands for the end of the axis.

use crate::model::{Alphabet, BoundaryString};

/// Smallest string above every string that starts with `prefix`, or `None`
/// when no such string exists (prefix made only of the alphabet maximum).
pub fn successor(prefix: &[u8], alphabet: Alphabet) -> Option<Vec<u8>> {
    let keep = prefix.iter().rposition(|&b| b != alphabet.max)?;
    let mut out = prefix[..=keep].to_vec();
    out[keep] += 1;
    Some(out)
}

/// Bytes of the smallest query `>= boundary` over `alphabet`.
pub fn first_query(boundary: &BoundaryString, alphabet: Alphabet) -> Option<Vec<u8>> {
    for (i, &c) in boundary.bytes.iter().enumerate() {
        if c < alphabet.min {
            let mut out = boundary.bytes[..i].to_vec();
            out.push(alphabet.min);
            return Some(out);
        }
        if c > alphabet.max {
            return if i == 0 {
                None
            } else {
                successor(&boundary.bytes[..i], alphabet)
            };
        }
    }
    if boundary.bytes.is_empty() {
        Some(vec![alphabet.min])
    } else {
        Some(boundary.bytes.clone())
    }
}

/// `hi <= limit∅`, where `None` means +infinity on either side.
fn bound_le_terminated(hi: Option<&BoundaryString>, limit: Option<&[u8]>) -> bool {
    match (hi, limit) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(h), Some(l)) => h.bytes.as_slice().cmp(l).then(h.terminated.cmp(&true)).is_le(),
    }
}

/// Length of the longest common prefix of all queries in `[lo, hi)`.
///
/// `None` when the interval holds no query at all, `Some(0)` when the queries
/// in it do not share a first byte.
pub fn interval_symbol_len(
    lo: &BoundaryString,
    hi: Option<&BoundaryString>,
    alphabet: Alphabet,
) -> Option<usize> {
    let first = first_query(lo, alphabet)?;
    if let Some(h) = hi {
        if !h.cmp_query(&first).is_gt() {
            return None;
        }
    }
    // Shorter prefixes have larger successors, so the test is monotone.
    for len in (1..=first.len()).rev() {
        let succ = successor(&first[..len], alphabet);
        if bound_le_terminated(hi, succ.as_deref()) {
            return Some(len);
        }
    }
    Some(0)
}

/// Whether `[lo, hi)` contains at least one query.
pub fn contains_query(lo: &BoundaryString, hi: Option<&BoundaryString>, alphabet: Alphabet) -> bool {
    interval_symbol_len(lo, hi, alphabet).is_some()
}

/// Covers the gap `[lo, hi)` with intervals of non-empty symbol, splitting at
/// first-byte boundaries where the gap spans several leading bytes. Gaps with
/// no query are skipped: the preceding interval absorbs them unchanged.
pub fn fill_gap(
    lo: BoundaryString,
    hi: Option<&BoundaryString>,
    alphabet: Alphabet,
    out: &mut Vec<(BoundaryString, usize)>,
) {
    let mut lo = lo;
    loop {
        match interval_symbol_len(&lo, hi, alphabet) {
            None => return,
            Some(0) => {
                let first = first_query(&lo, alphabet).expect("non-empty interval");
                let mid = BoundaryString::bare(
                    successor(&first[..1], alphabet).expect("a split point exists below the upper bound"),
                );
                let len = interval_symbol_len(&lo, Some(&mid), alphabet)
                    .expect("split piece holds the first query");
                debug_assert!(len >= 1);
                out.push((lo, len));
                lo = mid;
            }
            Some(len) => {
                out.push((lo, len));
                return;
            }
        }
    }
}

pub fn common_prefix_len(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}
