//! Dictionary files and encoded-key record streams.
//!
//! Dictionary layout, little-endian throughout:
//!
//! ```text
//! "HOPEDICT" | version u16 | scheme u8 | count u32 | seed u64
//! count x (boundary_len u16 | boundary | terminated u8 | symbol_len u16 | code_len u8 | code u64)
//! crc32 of everything above
//! ```

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{BoundaryString, CodeWord, DictEntry, Dictionary, EncodedKey, Scheme};

pub const MAGIC: &[u8; 8] = b"HOPEDICT";
pub const VERSION: u16 = 1;

const HEADER_LEN: usize = 8 + 2 + 1 + 4 + 8;

pub fn dictionary_to_bytes(dict: &Dictionary) -> Result<Vec<u8>> {
    if !dict.alphabet().is_full() {
        return Err(Error::InvalidDictionary(
            "only full-alphabet dictionaries can be saved".into(),
        ));
    }
    let count = u32::try_from(dict.len())
        .map_err(|_| Error::InvalidDictionary("too many entries for the file format".into()))?;
    let mut out = Vec::with_capacity(HEADER_LEN + dict.len() * 20 + 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(dict.scheme().tag());
    out.extend_from_slice(&count.to_le_bytes());
    out.extend_from_slice(&dict.seed().to_le_bytes());
    for e in dict.entries() {
        let b = &e.left_boundary;
        let blen = u16::try_from(b.bytes.len())
            .map_err(|_| Error::InvalidDictionary("boundary longer than 65535 bytes".into()))?;
        let slen = u16::try_from(e.symbol_len)
            .map_err(|_| Error::InvalidDictionary("symbol longer than 65535 bytes".into()))?;
        out.extend_from_slice(&blen.to_le_bytes());
        out.extend_from_slice(&b.bytes);
        out.push(b.terminated as u8);
        out.extend_from_slice(&slen.to_le_bytes());
        out.push(e.code.len());
        out.extend_from_slice(&e.code.bits().to_le_bytes());
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8]> {
        let s = self
            .buf
            .get(self.pos..self.pos + n)
            .ok_or(Error::Truncated(what))?;
        self.pos += n;
        Ok(s)
    }

    fn array<const N: usize>(&mut self, what: &'static str) -> Result<[u8; N]> {
        Ok(self.take(N, what)?.try_into().expect("length checked"))
    }
}

/// Parses a dictionary file. Checks structure and checksum only; run
/// [`Dictionary::validate`] for the semantic rules.
pub fn dictionary_from_bytes(bytes: &[u8]) -> Result<Dictionary> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(if bytes.len() < MAGIC.len() && MAGIC.starts_with(bytes) {
            Error::Truncated("magic")
        } else {
            Error::BadMagic
        });
    }
    if bytes.len() < HEADER_LEN + 4 {
        return Err(Error::Truncated("header"));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(tail.try_into().expect("4 bytes"));
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }

    let mut r = Reader {
        buf: body,
        pos: MAGIC.len(),
    };
    let version = u16::from_le_bytes(r.array("version")?);
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let scheme = Scheme::from_tag(r.array::<1>("scheme")?[0])?;
    let count = u32::from_le_bytes(r.array("entry count")?) as usize;
    let seed = u64::from_le_bytes(r.array("seed")?);

    let mut entries = Vec::with_capacity(count.min(body.len() / 15));
    for _ in 0..count {
        let blen = u16::from_le_bytes(r.array("boundary length")?) as usize;
        let bytes = r.take(blen, "boundary")?.to_vec();
        let terminated = match r.array::<1>("terminator flag")?[0] {
            0 => false,
            1 => true,
            f => return Err(Error::Malformed(format!("terminator flag {f}"))),
        };
        let symbol_len = u16::from_le_bytes(r.array("symbol length")?) as usize;
        let code_len = r.array::<1>("code length")?[0];
        let bits = u64::from_le_bytes(r.array("code")?);
        let code = CodeWord::try_new(bits, code_len)
            .ok_or_else(|| Error::Malformed(format!("code {bits:#x} does not fit {code_len} bits")))?;
        entries.push(DictEntry {
            left_boundary: BoundaryString { bytes, terminated },
            symbol_len,
            code,
        });
    }
    if r.pos != body.len() {
        return Err(Error::Malformed(format!(
            "{} trailing bytes after the entries",
            body.len() - r.pos
        )));
    }
    Ok(Dictionary::new(scheme, entries).with_seed(seed))
}

pub fn save_dictionary(dict: &Dictionary, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, dictionary_to_bytes(dict)?)?;
    Ok(())
}

pub fn load_dictionary(path: impl AsRef<Path>) -> Result<Dictionary> {
    dictionary_from_bytes(&fs::read(path)?)
}

/// Concatenated wire records.
pub fn encoded_to_bytes(keys: &[EncodedKey]) -> Vec<u8> {
    let mut out = Vec::new();
    for k in keys {
        k.write_wire(&mut out);
    }
    out
}

pub fn encoded_from_bytes(mut bytes: &[u8]) -> Result<Vec<EncodedKey>> {
    let mut out = Vec::new();
    while !bytes.is_empty() {
        let (k, n) = EncodedKey::read_wire(bytes)?;
        out.push(k);
        bytes = &bytes[n..];
    }
    Ok(out)
}
