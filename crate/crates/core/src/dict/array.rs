use std::mem::size_of;

use super::Hit;
use crate::error::{Error, Result};
use crate::model::{CodeWord, Dictionary, Scheme};
use crate::select::divide_fixed;

const BLOCK: usize = 257;

/// Direct-index table for Single- and Double-Char: an 8-bit code length and
/// a 32-bit code per interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrayDict {
    gram_len: usize,
    lens: Vec<u8>,
    codes: Vec<u32>,
}

impl ArrayDict {
    pub fn build(dict: &Dictionary) -> Result<Self> {
        let gram_len = match dict.scheme() {
            Scheme::SingleChar => 1,
            Scheme::DoubleChar => 2,
            scheme => {
                return Err(Error::SchemeMismatch {
                    scheme,
                    structure: "array",
                })
            }
        };
        let layout = divide_fixed(gram_len)?;
        let same_layout = dict.len() == layout.len()
            && dict
                .entries()
                .iter()
                .zip(layout.intervals())
                .all(|(e, iv)| e.left_boundary == iv.left && e.symbol_len == iv.symbol_len);
        if !same_layout {
            return Err(Error::InvalidDictionary(format!(
                "{} dictionary does not have the fixed interval layout",
                dict.scheme()
            )));
        }
        let mut lens = Vec::with_capacity(dict.len());
        let mut codes = Vec::with_capacity(dict.len());
        for e in dict.entries() {
            if e.code.len() > 32 {
                return Err(Error::CodeTooWide { len: e.code.len() });
            }
            lens.push(e.code.len());
            codes.push(e.code.bits() as u32);
        }
        Ok(ArrayDict {
            gram_len,
            lens,
            codes,
        })
    }

    /// Slot index of the interval containing `query`. The empty query maps
    /// to slot 0, the interval starting at the empty boundary.
    #[inline]
    pub fn slot(&self, query: &[u8]) -> usize {
        let c = query.first().copied().unwrap_or(0) as usize;
        match (self.gram_len, query.get(1)) {
            (1, _) => c,
            (_, None) => c * BLOCK,
            (_, Some(&d)) => c * BLOCK + 1 + d as usize,
        }
    }

    #[inline]
    pub fn lookup(&self, query: &[u8]) -> Hit {
        let slot = self.slot(query);
        let symbol_len = if self.gram_len == 2 && !slot.is_multiple_of(BLOCK) {
            2
        } else {
            1
        };
        Hit {
            symbol_len,
            code: CodeWord::new(self.codes[slot] as u64, self.lens[slot]),
        }
    }

    pub fn gram_len(&self) -> usize {
        self.gram_len
    }

    pub fn memory_footprint(&self) -> usize {
        size_of::<Self>() + self.lens.len() * size_of::<u8>() + self.codes.len() * size_of::<u32>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::assign_fixed;

    fn fixed(gram_len: usize, scheme: Scheme) -> Dictionary {
        let div = divide_fixed(gram_len).unwrap();
        let codes = assign_fixed(div.len());
        div.into_dictionary(scheme, &codes)
    }

    #[test]
    fn single_char_slots() {
        let a = ArrayDict::build(&fixed(1, Scheme::SingleChar)).unwrap();
        let hit = a.lookup(b"abc");
        assert_eq!(
            hit,
            Hit {
                symbol_len: 1,
                code: CodeWord::new(97, 8)
            }
        );
        assert_eq!(a.memory_footprint(), size_of::<ArrayDict>() + 256 * 5);
    }

    #[test]
    fn double_char_slots() {
        let dict = fixed(2, Scheme::DoubleChar);
        let a = ArrayDict::build(&dict).unwrap();
        assert_eq!(a.slot(b"aa"), 97 * 257 + 1 + 97);
        // The last byte of a key lands in the terminator gap [b∅, b\x00).
        assert_eq!(a.slot(b"b"), 98 * 257);
        assert_eq!(a.lookup(b"b").symbol_len, 1);
        assert_eq!(a.lookup(b"ab").symbol_len, 2);
        for q in [&b"a"[..], b"ab", b"\xff\xff", b"\x00", b"zz top"] {
            let e = &dict.entries()[dict.find(q)];
            assert_eq!(
                a.lookup(q),
                Hit {
                    symbol_len: e.symbol_len,
                    code: e.code
                }
            );
        }
    }

    #[test]
    fn rejects_other_schemes_and_layouts() {
        let dict = fixed(1, Scheme::SingleChar);
        let wrong = Dictionary::new(Scheme::ThreeGrams, dict.entries().to_vec());
        assert!(matches!(
            ArrayDict::build(&wrong),
            Err(Error::SchemeMismatch { .. })
        ));
        let short = Dictionary::new(Scheme::SingleChar, dict.entries()[..10].to_vec());
        assert!(matches!(
            ArrayDict::build(&short),
            Err(Error::InvalidDictionary(_))
        ));
    }

    #[test]
    fn wide_codes_do_not_fit() {
        let div = divide_fixed(1).unwrap();
        let mut codes: Vec<CodeWord> = assign_fixed(256).to_vec();
        codes[255] = CodeWord::new(u64::MAX, 64);
        let dict = div.into_dictionary(Scheme::SingleChar, &codes);
        assert!(matches!(
            ArrayDict::build(&dict),
            Err(Error::CodeTooWide { len: 64 })
        ));
    }
}
