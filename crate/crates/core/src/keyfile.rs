//! Newline-delimited key files with a small escape layer (`\n`, `\\`,
//! `\xHH`) so keys may hold any byte.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

fn hex(c: u8) -> Option<u8> {
    (c as char).to_digit(16).map(|d| d as u8)
}

fn unescape(line: &[u8], lineno: usize) -> Result<Vec<u8>> {
    let bad = |what: &str| Error::Malformed(format!("line {lineno}: {what}"));
    let mut out = Vec::with_capacity(line.len());
    let mut i = 0;
    while i < line.len() {
        if line[i] != b'\\' {
            out.push(line[i]);
            i += 1;
            continue;
        }
        match line.get(i + 1) {
            Some(b'n') => {
                out.push(b'\n');
                i += 2;
            }
            Some(b'\\') => {
                out.push(b'\\');
                i += 2;
            }
            Some(b'x') => {
                let hi = line.get(i + 2).copied().and_then(hex);
                let lo = line.get(i + 3).copied().and_then(hex);
                match (hi, lo) {
                    (Some(h), Some(l)) => out.push(h << 4 | l),
                    _ => return Err(bad("\\x needs two hex digits")),
                }
                i += 4;
            }
            Some(&c) => return Err(bad(&format!("unknown escape \\{}", c as char))),
            None => return Err(bad("dangling backslash")),
        }
    }
    Ok(out)
}

/// One key per line. A final newline does not start another key; an empty
/// line is the empty key.
pub fn parse_keys(text: &[u8]) -> Result<Vec<Vec<u8>>> {
    let body = text.strip_suffix(b"\n").unwrap_or(text);
    if text.is_empty() {
        return Ok(Vec::new());
    }
    body.split(|&b| b == b'\n')
        .enumerate()
        .map(|(i, line)| unescape(line, i + 1))
        .collect()
}

pub fn escape_key(key: &[u8], out: &mut Vec<u8>) {
    for &b in key {
        match b {
            b'\n' => out.extend_from_slice(b"\\n"),
            b'\\' => out.extend_from_slice(b"\\\\"),
            0x20..=0x7e => out.push(b),
            _ => out.extend_from_slice(format!("\\x{b:02x}").as_bytes()),
        }
    }
}

pub fn format_keys<K: AsRef<[u8]>>(keys: &[K]) -> Vec<u8> {
    let mut out = Vec::new();
    for k in keys {
        escape_key(k.as_ref(), &mut out);
        out.push(b'\n');
    }
    out
}

pub fn read_key_file(path: impl AsRef<Path>) -> Result<Vec<Vec<u8>>> {
    parse_keys(&fs::read(path)?)
}

pub fn write_key_file<K: AsRef<[u8]>>(path: impl AsRef<Path>, keys: &[K]) -> Result<()> {
    fs::write(path, format_keys(keys))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes() {
        let keys = parse_keys(b"plain\na\\nb\nback\\\\slash\n\\x00\\xFF\n\nlast").unwrap();
        assert_eq!(
            keys,
            vec![
                b"plain".to_vec(),
                b"a\nb".to_vec(),
                b"back\\slash".to_vec(),
                vec![0, 0xff],
                vec![],
                b"last".to_vec(),
            ]
        );
    }

    #[test]
    fn round_trip() {
        let keys: Vec<Vec<u8>> = vec![vec![], (0..=255).collect(), b"x\\n".to_vec()];
        assert_eq!(parse_keys(&format_keys(&keys)).unwrap(), keys);
        assert!(parse_keys(b"").unwrap().is_empty());
        assert_eq!(parse_keys(b"\n").unwrap(), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn bad_escapes() {
        assert!(parse_keys(b"ok\n\\q").is_err());
        assert!(parse_keys(b"\\x4").is_err());
        assert!(parse_keys(b"trailing\\").is_err());
    }
}
