use crate::model::{CodeWord, EncodedKey};

/// Growable MSB-first bit string backed by 64-bit words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitBuffer {
    words: Vec<u64>,
    bit_len: usize,
}

impl BitBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitBuffer {
            words: Vec::with_capacity(bits.div_ceil(64)),
            bit_len: 0,
        }
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn is_empty(&self) -> bool {
        self.bit_len == 0
    }

    pub fn clear(&mut self) {
        self.words.clear();
        self.bit_len = 0;
    }

    /// Appends `code` after the current bits, splitting it across two words
    /// when it straddles a word boundary.
    #[inline]
    pub fn append_code(&mut self, code: CodeWord) {
        let len = code.len() as usize;
        if len == 0 {
            return;
        }
        let bits = code.bits();
        let offset = self.bit_len % 64;
        if offset == 0 {
            self.words.push(0);
        }
        let free = 64 - offset;
        let last = self.words.len() - 1;
        if len <= free {
            self.words[last] |= bits << (free - len);
        } else {
            let spill = len - free;
            self.words[last] |= bits >> spill;
            self.words.push(bits << (64 - spill));
        }
        self.bit_len += len;
    }

    /// Replaces the contents with the first `bit_len` bits of `other`,
    /// reusing this buffer's allocation.
    pub fn copy_prefix_from(&mut self, other: &BitBuffer, bit_len: usize) {
        let bit_len = bit_len.min(other.bit_len);
        self.words.clear();
        self.words.extend_from_slice(&other.words[..bit_len.div_ceil(64)]);
        self.bit_len = other.bit_len;
        self.truncate(bit_len);
    }

    /// Keeps only the first `bit_len` bits.
    pub fn truncate(&mut self, bit_len: usize) {
        if bit_len >= self.bit_len {
            return;
        }
        self.words.truncate(bit_len.div_ceil(64));
        let rem = bit_len % 64;
        if rem != 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= u64::MAX << (64 - rem);
            }
        }
        self.bit_len = bit_len;
    }

    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.bit_len);
        self.words[i / 64] >> (63 - i % 64) & 1 == 1
    }

    pub fn to_encoded_key(&self) -> EncodedKey {
        let n = self.bit_len.div_ceil(8);
        let mut bytes = Vec::with_capacity(self.words.len() * 8);
        for w in &self.words {
            bytes.extend_from_slice(&w.to_be_bytes());
        }
        bytes.truncate(n);
        EncodedKey::from_parts_unchecked(bytes, self.bit_len)
    }
}
