use super::BitBuffer;
use crate::axis::common_prefix_len;
use crate::dict::DictStructure;
use crate::error::{Error, Result};
use crate::model::{Dictionary, EncodedKey, Scheme};

/// Encodes keys through a lookup structure.
#[derive(Clone, Debug)]
pub struct Encoder {
    structure: DictStructure,
    scheme: Scheme,
    /// Bytes a lookup can inspect: the longest boundary. `None` for the ALM
    /// schemes, whose symbols cannot be aligned with a shared prefix up front.
    window: Option<usize>,
}

impl Encoder {
    pub fn new(dict: &Dictionary) -> Result<Self> {
        let structure = DictStructure::build(dict)?;
        let window = match dict.scheme() {
            Scheme::Alm | Scheme::AlmImproved => None,
            _ => dict.entries().iter().map(|e| e.left_boundary.bytes.len()).max(),
        };
        Ok(Encoder {
            structure,
            scheme: dict.scheme(),
            window,
        })
    }

    pub fn structure(&self) -> &DictStructure {
        &self.structure
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Encodes `key[pos..]` onto `buf`.
    #[inline]
    fn encode_from(&self, key: &[u8], mut pos: usize, buf: &mut BitBuffer) {
        while pos < key.len() {
            let hit = self.structure.lookup(&key[pos..]);
            buf.append_code(hit.code);
            pos += hit.symbol_len.clamp(1, key.len() - pos);
        }
    }

    pub fn encode_into(&self, key: &[u8], buf: &mut BitBuffer) {
        self.encode_from(key, 0, buf);
    }

    pub fn encode(&self, key: &[u8]) -> EncodedKey {
        let mut buf = BitBuffer::with_capacity(key.len() * 8);
        self.encode_from(key, 0, &mut buf);
        buf.to_encoded_key()
    }

    /// Encodes the two ends of a range together.
    pub fn encode_pair(&self, low: &[u8], high: &[u8]) -> Result<(EncodedKey, EncodedKey)> {
        let mut out = self.encode_batch(&[low, high], 2)?.into_iter();
        Ok((out.next().unwrap(), out.next().unwrap()))
    }

    /// Encodes sorted keys block by block. Within a block the lookups that
    /// only read the block's common prefix are done once, for the first key.
    /// Output is identical to encoding each key on its own.
    pub fn encode_batch<K: AsRef<[u8]>>(&self, keys: &[K], block_size: usize) -> Result<Vec<EncodedKey>> {
        if block_size == 0 {
            return Err(Error::InvalidConfig("block size must be positive".into()));
        }
        // Order is checked as keys are visited, while they are in cache.
        let sorted_at = |i: usize| i == 0 || keys[i - 1].as_ref() <= keys[i].as_ref();
        let mut out = Vec::with_capacity(keys.len());
        let Some(window) = self.window.filter(|_| block_size > 1) else {
            for (i, k) in keys.iter().enumerate() {
                if !sorted_at(i) {
                    return Err(Error::OrderViolation { index: i });
                }
                out.push(self.encode(k.as_ref()));
            }
            return Ok(out);
        };

        let mut first_buf = BitBuffer::new();
        let mut scratch = BitBuffer::new();
        for (b, block) in keys.chunks(block_size).enumerate() {
            let base = b * block_size;
            if !sorted_at(base) {
                return Err(Error::OrderViolation { index: base });
            }
            let first = block[0].as_ref();
            let lcp = common_prefix_len(first, block[block.len() - 1].as_ref());

            first_buf.clear();
            let mut pos = 0;
            // (source position, bit length) after the last shared lookup.
            let mut shared = (0, 0);
            while pos < first.len() {
                let shareable = pos + window <= lcp;
                let hit = self.structure.lookup(&first[pos..]);
                first_buf.append_code(hit.code);
                pos += hit.symbol_len.clamp(1, first.len() - pos);
                if shareable {
                    shared = (pos, first_buf.bit_len());
                }
            }
            out.push(first_buf.to_encoded_key());

            for (j, key) in block.iter().enumerate().skip(1) {
                if !sorted_at(base + j) {
                    return Err(Error::OrderViolation { index: base + j });
                }
                scratch.copy_prefix_from(&first_buf, shared.1);
                self.encode_from(key.as_ref(), shared.0, &mut scratch);
                out.push(scratch.to_encoded_key());
            }
        }
        Ok(out)
    }
}
