use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Dictionary, EncodedKey};

/// Inverse of the encoder, used to verify round trips.
#[derive(Clone, Debug)]
pub struct Decoder {
    by_code: HashMap<(u8, u64), usize>,
    /// Distinct code lengths, ascending.
    lens: Vec<u8>,
    symbols: Vec<Vec<u8>>,
}

/// Reads `len` bits (at most 64) starting at bit `pos`.
fn read_bits(key: &EncodedKey, pos: usize, len: usize) -> u64 {
    let bytes = key.bytes();
    let mut v = 0u64;
    let mut i = pos;
    let end = pos + len;
    while i < end {
        let byte = bytes[i / 8];
        let off = i % 8;
        let take = (8 - off).min(end - i);
        let chunk = (byte >> (8 - off - take)) & ((1u16 << take) - 1) as u8;
        v = (v << take) | chunk as u64;
        i += take;
    }
    v
}

impl Decoder {
    pub fn new(dict: &Dictionary) -> Result<Self> {
        let mut by_code = HashMap::with_capacity(dict.len());
        let mut symbols = Vec::with_capacity(dict.len());
        for (i, e) in dict.entries().iter().enumerate() {
            let symbol = dict
                .symbol(i)
                .ok_or_else(|| Error::InvalidDictionary(format!("entry {i} has no symbol")))?;
            symbols.push(symbol);
            if by_code.insert((e.code.len(), e.code.bits()), i).is_some() {
                return Err(Error::InvalidDictionary(format!("duplicate code {}", e.code)));
            }
        }
        let mut lens: Vec<u8> = by_code.keys().map(|&(l, _)| l).collect();
        lens.sort_unstable();
        lens.dedup();
        Ok(Decoder {
            by_code,
            lens,
            symbols,
        })
    }

    pub fn decode(&self, key: &EncodedKey) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let mut pos = 0;
        let total = key.bit_len();
        while pos < total {
            let found = self
                .lens
                .iter()
                .take_while(|&&l| pos + l as usize <= total)
                .find_map(|&l| {
                    let bits = read_bits(key, pos, l as usize);
                    self.by_code.get(&(l, bits)).map(|&i| (i, l))
                });
            let Some((i, l)) = found else {
                return Err(Error::MalformedBits { bit: pos });
            };
            out.extend_from_slice(&self.symbols[i]);
            pos += l as usize;
        }
        Ok(out)
    }
}

/// One-shot decode; build a [`Decoder`] to decode many keys.
pub fn decode(dict: &Dictionary, key: &EncodedKey) -> Result<Vec<u8>> {
    Decoder::new(dict)?.decode(key)
}
