//! Structural checks on a dictionary. Intervals must cover the string axis
//! and each must consume a non-empty common prefix. Codes must be strictly
//! increasing and prefix-free.

use std::fmt;

use crate::axis;
use crate::model::{BoundaryString, CodeWord, Dictionary};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoEntries,
    /// The axis is not covered below this first boundary.
    FirstBoundaryNotEmpty {
        boundary: BoundaryString,
    },
    BoundaryNotIncreasing {
        index: usize,
    },
    CodeNotIncreasing {
        index: usize,
    },
    NotPrefixFree {
        prefix: usize,
        extension: usize,
    },
    ZeroSymbolLen {
        index: usize,
    },
    /// `symbol_len` is longer than the common prefix of the interval.
    SymbolNotCommonPrefix {
        index: usize,
        symbol_len: usize,
        common_prefix: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoEntries => write!(f, "dictionary has no entries"),
            Violation::FirstBoundaryNotEmpty { boundary } => {
                write!(f, "axis not covered below first boundary {boundary:?}")
            }
            Violation::BoundaryNotIncreasing { index } => {
                write!(f, "boundary {index} does not exceed boundary {}", index - 1)
            }
            Violation::CodeNotIncreasing { index } => {
                write!(f, "code {index} does not exceed code {}", index - 1)
            }
            Violation::NotPrefixFree { prefix, extension } => {
                write!(f, "code {prefix} is a prefix of code {extension}")
            }
            Violation::ZeroSymbolLen { index } => write!(f, "entry {index} consumes no bytes"),
            Violation::SymbolNotCommonPrefix {
                index,
                symbol_len,
                common_prefix,
            } => write!(
                f,
                "entry {index} consumes {symbol_len} bytes but its interval only shares {common_prefix}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("OK");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every violated invariant. Never aborts early.
pub fn validate_dictionary(dict: &Dictionary) -> ValidationReport {
    let entries = dict.entries();
    let alphabet = dict.alphabet();
    let mut violations = Vec::new();

    let Some(first) = entries.first() else {
        return ValidationReport {
            violations: vec![Violation::NoEntries],
        };
    };
    if !first.left_boundary.is_empty() {
        violations.push(Violation::FirstBoundaryNotEmpty {
            boundary: first.left_boundary.clone(),
        });
    }

    for i in 1..entries.len() {
        if entries[i].left_boundary <= entries[i - 1].left_boundary {
            violations.push(Violation::BoundaryNotIncreasing { index: i });
        }
        if entries[i].code <= entries[i - 1].code {
            violations.push(Violation::CodeNotIncreasing { index: i });
        }
    }

    violations.extend(prefix_violations(entries.iter().map(|e| e.code)));

    for (i, entry) in entries.iter().enumerate() {
        if entry.symbol_len == 0 {
            violations.push(Violation::ZeroSymbolLen { index: i });
            continue;
        }
        let hi = entries.get(i + 1).map(|e| &e.left_boundary);
        let common = match axis::interval_symbol_len(&entry.left_boundary, hi, alphabet) {
            Some(n) => n,
            // No key can land here; the symbol only has to be spelled by the boundary.
            None => entry.left_boundary.bytes.len(),
        };
        if entry.symbol_len > common {
            violations.push(Violation::SymbolNotCommonPrefix {
                index: i,
                symbol_len: entry.symbol_len,
                common_prefix: common,
            });
        }
    }

    ValidationReport { violations }
}

fn prefix_violations(codes: impl Iterator<Item = CodeWord>) -> Vec<Violation> {
    let mut sorted: Vec<(CodeWord, usize)> = codes.enumerate().map(|(i, c)| (c, i)).collect();
    sorted.sort();
    // In sorted order every extension of a code directly follows it, so
    // checking neighbours finds at least one witness per offending code.
    sorted
        .windows(2)
        .filter(|w| w[0].0.is_prefix_of(&w[1].0))
        .map(|w| Violation::NotPrefixFree {
            prefix: w[0].1,
            extension: w[1].1,
        })
        .collect()
}
