use crate::error::{Error, Result};

pub const ORACLE_MAX: usize = 16;

/// Minimum expected code length over all alphabetic binary trees, by the
/// cubic interval recurrence `cost(i, j) = min_k cost(i, k) + cost(k+1, j) + W(i, j)`.
///
/// A single symbol costs one bit, matching the one-bit code convention.
pub fn optimal_alphabetic_oracle(probs: &[f64]) -> Result<f64> {
    let n = probs.len();
    if n > ORACLE_MAX {
        return Err(Error::TooLarge { n, max: ORACLE_MAX });
    }
    if n == 0 {
        return Err(Error::InvalidConfig("no probabilities".into()));
    }
    if n == 1 {
        return Ok(probs[0]);
    }
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + probs[i];
    }
    let mut cost = vec![vec![0.0f64; n]; n];
    for span in 2..=n {
        for i in 0..=n - span {
            let j = i + span - 1;
            let best = (i..j)
                .map(|k| cost[i][k] + cost[k + 1][j])
                .fold(f64::INFINITY, f64::min);
            cost[i][j] = best + prefix[j + 1] - prefix[i];
        }
    }
    Ok(cost[0][n - 1])
}
