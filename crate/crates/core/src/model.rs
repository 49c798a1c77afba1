//! Domain types shared by every stage, from interval boundaries up to
//! encoded keys.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::axis;
use crate::error::{Error, Result};

/// A source key. Any byte value is allowed.
pub type ByteKey = Vec<u8>;

/// The contiguous byte range that source keys are drawn from.
///
/// Production dictionaries always use [`Alphabet::FULL`]. Narrower ranges
/// exist so that small hand-written dictionaries (a three-letter alphabet,
/// say) can still be complete.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    pub min: u8,
    pub max: u8,
}

impl Alphabet {
    pub const FULL: Alphabet = Alphabet { min: 0, max: 255 };

    pub fn new(min: u8, max: u8) -> Self {
        assert!(min <= max, "empty alphabet {min}..={max}");
        Alphabet { min, max }
    }

    #[inline]
    pub fn contains(&self, byte: u8) -> bool {
        (self.min..=self.max).contains(&byte)
    }

    pub fn is_full(&self) -> bool {
        *self == Self::FULL
    }

    pub fn size(&self) -> usize {
        self.max as usize - self.min as usize + 1
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::FULL
    }
}

/// A left interval boundary on the string axis.
///
/// `terminated` appends the logical terminator, which sorts below every
/// byte: `"b" < "b∅" < "b\x00"`. The derived ordering (bytes first, then the
/// flag) realizes exactly that order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryString {
    pub bytes: Vec<u8>,
    pub terminated: bool,
}

impl BoundaryString {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn bare(bytes: impl Into<Vec<u8>>) -> Self {
        BoundaryString {
            bytes: bytes.into(),
            terminated: false,
        }
    }

    pub fn terminated(bytes: impl Into<Vec<u8>>) -> Self {
        BoundaryString {
            bytes: bytes.into(),
            terminated: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty() && !self.terminated
    }

    /// Orders this boundary against a lookup query. Queries are the remaining
    /// source bytes followed by the terminator.
    #[inline]
    pub fn cmp_query(&self, query: &[u8]) -> Ordering {
        match self.bytes.as_slice().cmp(query) {
            Ordering::Equal if !self.terminated => Ordering::Less,
            ord => ord,
        }
    }
}

impl fmt::Display for BoundaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bytes {
            if b.is_ascii_graphic() && b != b'\\' {
                write!(f, "{}", b as char)?;
            } else {
                write!(f, "\\x{b:02x}")?;
            }
        }
        if self.terminated {
            f.write_str("∅")?;
        }
        Ok(())
    }
}

/// Total order on boundaries; see [`BoundaryString`].
pub fn compare_boundary(a: &BoundaryString, b: &BoundaryString) -> Ordering {
    a.cmp(b)
}

/// A prefix-code word of 1 to 64 bits, stored right-aligned.
///
/// Comparison is MSB-first as left-aligned bit strings, so a code sorts
/// before all of its extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeWord {
    bits: u64,
    len: u8,
}

impl CodeWord {
    pub const MAX_LEN: u8 = 64;

    /// Zero-length placeholder; never a valid dictionary code.
    pub(crate) const EMPTY: CodeWord = CodeWord { bits: 0, len: 0 };

    /// Returns `None` when `len` is outside `1..=64` or `bits` has set bits at
    /// or above position `len`.
    pub fn try_new(bits: u64, len: u8) -> Option<Self> {
        if len == 0 || len > Self::MAX_LEN {
            return None;
        }
        if len < 64 && bits >> len != 0 {
            return None;
        }
        Some(CodeWord { bits, len })
    }

    pub fn new(bits: u64, len: u8) -> Self {
        Self::try_new(bits, len).unwrap_or_else(|| panic!("invalid code word {bits:#x}/{len}"))
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> u8 {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn left_aligned(&self) -> u64 {
        self.bits << (64 - self.len as u32)
    }

    pub fn is_prefix_of(&self, other: &CodeWord) -> bool {
        self.len <= other.len && other.bits >> (other.len - self.len) == self.bits
    }
}

impl Ord for CodeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.left_aligned()
            .cmp(&other.left_aligned())
            .then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for CodeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len).rev() {
            f.write_str(if self.bits >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Compression scheme tag. The discriminants are the on-disk tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Scheme {
    SingleChar = 0,
    DoubleChar = 1,
    ThreeGrams = 2,
    FourGrams = 3,
    Alm = 4,
    AlmImproved = 5,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::SingleChar,
        Scheme::DoubleChar,
        Scheme::ThreeGrams,
        Scheme::FourGrams,
        Scheme::Alm,
        Scheme::AlmImproved,
    ];

    pub fn tag(self) -> u8 {
        self as u8
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        Scheme::ALL
            .get(tag as usize)
            .copied()
            .ok_or(Error::UnknownScheme(tag))
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::SingleChar => "single-char",
            Scheme::DoubleChar => "double-char",
            Scheme::ThreeGrams => "3-grams",
            Scheme::FourGrams => "4-grams",
            Scheme::Alm => "alm",
            Scheme::AlmImproved => "alm-improved",
        }
    }

    /// Interval length for fixed-length-boundary schemes.
    pub fn gram_len(self) -> Option<usize> {
        match self {
            Scheme::SingleChar => Some(1),
            Scheme::DoubleChar => Some(2),
            Scheme::ThreeGrams => Some(3),
            Scheme::FourGrams => Some(4),
            Scheme::Alm | Scheme::AlmImproved => None,
        }
    }

    /// Single- and Double-Char have a dictionary size fixed by the alphabet.
    pub fn has_fixed_size(self) -> bool {
        matches!(self, Scheme::SingleChar | Scheme::DoubleChar)
    }

    pub fn uses_fixed_codes(self) -> bool {
        self == Scheme::Alm
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        let scheme = match norm.as_str() {
            "single-char" | "single" | "singlechar" => Scheme::SingleChar,
            "double-char" | "double" | "doublechar" => Scheme::DoubleChar,
            "3-grams" | "3grams" | "three-grams" | "threegrams" => Scheme::ThreeGrams,
            "4-grams" | "4grams" | "four-grams" | "fourgrams" => Scheme::FourGrams,
            "alm" => Scheme::Alm,
            "alm-improved" | "almimproved" => Scheme::AlmImproved,
            _ => return Err(Error::InvalidConfig(format!("unknown scheme {s:?}"))),
        };
        Ok(scheme)
    }
}

/// One interval `[left_boundary, next entry's boundary)` of a dictionary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DictEntry {
    pub left_boundary: BoundaryString,
    /// Source bytes consumed when a lookup lands in this interval.
    pub symbol_len: usize,
    pub code: CodeWord,
}

/// A complete, order-preserving dictionary: intervals sorted by left
/// boundary, with strictly increasing prefix-free codes.
///
/// Construction does not validate; call [`Dictionary::validate`] (or
/// [`crate::validate::validate_dictionary`]) for untrusted input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dictionary {
    scheme: Scheme,
    alphabet: Alphabet,
    entries: Vec<DictEntry>,
    seed: u64,
}

impl Dictionary {
    pub fn new(scheme: Scheme, entries: Vec<DictEntry>) -> Self {
        Self::with_alphabet(scheme, Alphabet::FULL, entries)
    }

    pub fn with_alphabet(scheme: Scheme, alphabet: Alphabet, entries: Vec<DictEntry>) -> Self {
        Dictionary {
            scheme,
            alphabet,
            entries,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Seed of the sampling PRNG the dictionary was built from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Bytes emitted by the decoder for entry `index`: the first `symbol_len`
    /// bytes of the smallest key the interval can contain.
    pub fn symbol(&self, index: usize) -> Option<Vec<u8>> {
        let entry = self.entries.get(index)?;
        let mut first = axis::first_query(&entry.left_boundary, self.alphabet)
            .unwrap_or_else(|| entry.left_boundary.bytes.clone());
        if first.len() < entry.symbol_len {
            return None;
        }
        first.truncate(entry.symbol_len);
        Some(first)
    }

    pub fn kraft_sum(&self) -> f64 {
        self.entries.iter().map(|e| (-(e.code.len() as f64)).exp2()).sum()
    }

    pub fn max_code_len(&self) -> u8 {
        self.entries.iter().map(|e| e.code.len()).max().unwrap_or(0)
    }

    pub fn validate(&self) -> crate::validate::ValidationReport {
        crate::validate::validate_dictionary(self)
    }

    /// Index of the entry whose interval contains `query` (remaining source
    /// bytes, implicitly terminated). Plain binary search over boundaries.
    pub fn find(&self, query: &[u8]) -> usize {
        let idx = self
            .entries
            .partition_point(|e| e.left_boundary.cmp_query(query) != Ordering::Greater);
        idx.saturating_sub(1)
    }
}

/// The compressed image of a key: MSB-first bits, zero-padded to a byte.
///
/// The derived order (padded bytes, then bit length) coincides with plain
/// bit-string order, prefixes first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EncodedKey {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl EncodedKey {
    /// Returns `None` if the byte length does not match `bit_len` or the pad
    /// bits are not zero.
    pub fn from_parts(bytes: Vec<u8>, bit_len: usize) -> Option<Self> {
        Self::well_formed(&bytes, bit_len).then_some(EncodedKey { bytes, bit_len })
    }

    fn well_formed(bytes: &[u8], bit_len: usize) -> bool {
        if bytes.len() != bit_len.div_ceil(8) {
            return false;
        }
        let pad = bytes.len() * 8 - bit_len;
        pad == 0 || bytes[bytes.len() - 1] & ((1u8 << pad) - 1) == 0
    }

    pub(crate) fn from_parts_unchecked(bytes: Vec<u8>, bit_len: usize) -> Self {
        debug_assert!(Self::well_formed(&bytes, bit_len));
        EncodedKey { bytes, bit_len }
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn is_empty(&self) -> bool {
        self.bit_len == 0
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.bit_len);
        self.bytes[i / 8] >> (7 - i % 8) & 1 == 1
    }

    /// Wire form: `u32` little-endian bit length, then the padded bytes.
    pub fn write_wire(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.bit_len as u32).to_le_bytes());
        out.extend_from_slice(&self.bytes);
    }

    pub fn to_wire(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + self.bytes.len());
        self.write_wire(&mut out);
        out
    }

    /// Parses one wire record from the front of `input`, returning the key
    /// and the number of bytes consumed.
    pub fn read_wire(input: &[u8]) -> Result<(Self, usize)> {
        let header: [u8; 4] = input
            .get(..4)
            .and_then(|h| h.try_into().ok())
            .ok_or(Error::Truncated("encoded key header"))?;
        let bit_len = u32::from_le_bytes(header) as usize;
        let n = bit_len.div_ceil(8);
        let body = input
            .get(4..4 + n)
            .ok_or(Error::Truncated("encoded key payload"))?;
        let key = EncodedKey::from_parts(body.to_vec(), bit_len)
            .ok_or_else(|| Error::Malformed("nonzero pad bits in encoded key".into()))?;
        Ok((key, 4 + n))
    }
}

impl fmt::Display for EncodedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.bit_len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_terminator_sits_between_prefix_and_zero_byte() {
        let b = BoundaryString::bare("b");
        let b_term = BoundaryString::terminated("b");
        let b_zero = BoundaryString::bare(b"b\x00".to_vec());
        assert_eq!(compare_boundary(&b_term, &b_zero), Ordering::Less);
        assert_eq!(compare_boundary(&b, &b_term), Ordering::Less);
        assert_eq!(
            compare_boundary(&BoundaryString::bare("abc"), &BoundaryString::bare("abd")),
            Ordering::Less
        );
    }

    #[test]
    fn query_comparison_treats_query_as_terminated() {
        assert_eq!(BoundaryString::bare("b").cmp_query(b"b"), Ordering::Less);
        assert_eq!(BoundaryString::terminated("b").cmp_query(b"b"), Ordering::Equal);
        assert_eq!(
            BoundaryString::bare(b"b\x00".to_vec()).cmp_query(b"b"),
            Ordering::Greater
        );
        assert_eq!(BoundaryString::empty().cmp_query(b"\x00"), Ordering::Less);
    }

    #[test]
    fn code_words_compare_msb_first() {
        let c0 = CodeWord::new(0b0, 1);
        let c01 = CodeWord::new(0b01, 2);
        let c1 = CodeWord::new(0b1, 1);
        let c10 = CodeWord::new(0b10, 2);
        assert!(c0 < c01);
        assert!(c01 < c1);
        assert!(c1 < c10);
        assert!(c0.is_prefix_of(&c01));
        assert!(!c1.is_prefix_of(&c01));
        assert_eq!(c10.to_string(), "10");
        assert!(CodeWord::try_new(0b100, 2).is_none());
        assert!(CodeWord::try_new(0, 0).is_none());
        assert!(CodeWord::try_new(u64::MAX, 64).is_some());
    }

    #[test]
    fn encoded_key_wire_round_trip() {
        let key = EncodedKey::from_parts(vec![0b1010_0000], 3).unwrap();
        let wire = key.to_wire();
        assert_eq!(wire, vec![3, 0, 0, 0, 0b1010_0000]);
        let (back, used) = EncodedKey::read_wire(&wire).unwrap();
        assert_eq!(back, key);
        assert_eq!(used, 5);
        assert!(EncodedKey::from_parts(vec![0b1010_0001], 3).is_none());
        assert!(EncodedKey::read_wire(&[9, 0, 0, 0, 1]).is_err());
    }

    #[test]
    fn scheme_tags_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(Scheme::from_tag(s.tag()).unwrap(), s);
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert!(Scheme::from_tag(6).is_err());
    }
}
