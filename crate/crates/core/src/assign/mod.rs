//! Order-preserving code assignment.

mod hu_tucker;
mod oracle;

use std::ops::Deref;

pub use hu_tucker::{assign_hu_tucker, canonical_codes, hu_tucker_depths};
pub use oracle::{optimal_alphabetic_oracle, ORACLE_MAX};

use crate::model::CodeWord;

/// One code per interval, in interval order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeAssignment {
    codes: Vec<CodeWord>,
}

impl CodeAssignment {
    pub fn new(codes: Vec<CodeWord>) -> Self {
        CodeAssignment { codes }
    }

    pub fn into_codes(self) -> Vec<CodeWord> {
        self.codes
    }

    /// `Σ p_i · len(c_i)`.
    pub fn expected_len(&self, probs: &[f64]) -> f64 {
        self.codes
            .iter()
            .zip(probs)
            .map(|(c, &p)| p * c.len() as f64)
            .sum()
    }

    pub fn kraft_sum(&self) -> f64 {
        self.codes.iter().map(|c| (-(c.len() as f64)).exp2()).sum()
    }
}

impl Deref for CodeAssignment {
    type Target = [CodeWord];

    fn deref(&self) -> &[CodeWord] {
        &self.codes
    }
}

/// `n` monotone integers of `⌈log₂ n⌉` bits each (one bit when `n` is 1).
pub fn assign_fixed(n: usize) -> CodeAssignment {
    assert!(n >= 1, "at least one interval");
    let width = (usize::BITS - (n - 1).leading_zeros()).max(1) as u8;
    CodeAssignment::new((0..n as u64).map(|v| CodeWord::new(v, width)).collect())
}
