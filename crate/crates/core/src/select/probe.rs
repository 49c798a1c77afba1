use crate::error::{Error, Result};
use crate::select::divide::IntervalDivision;

/// Which per-interval mass feeds the code assigner.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProbabilityWeighting {
    /// Lookup hit rate.
    #[default]
    Raw,
    /// Hit rate times symbol length (bytes consumed through the interval).
    SymbolLength,
}

/// Per-interval access statistics from a test encoding of the sample.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalProbabilities {
    hits: Vec<u64>,
    symbol_lens: Vec<usize>,
    total_lookups: u64,
}

impl IntervalProbabilities {
    pub fn from_hits(hits: Vec<u64>, symbol_lens: Vec<usize>) -> Self {
        assert_eq!(hits.len(), symbol_lens.len());
        let total_lookups = hits.iter().sum();
        IntervalProbabilities {
            hits,
            symbol_lens,
            total_lookups,
        }
    }

    pub fn len(&self) -> usize {
        self.hits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }

    pub fn hits(&self) -> &[u64] {
        &self.hits
    }

    pub fn total_lookups(&self) -> u64 {
        self.total_lookups
    }

    /// `p_i = hits_i / Σ hits`; uniform when nothing was hit.
    pub fn probs(&self) -> Vec<f64> {
        self.normalized(ProbabilityWeighting::Raw)
    }

    pub fn length_weighted(&self) -> Vec<f64> {
        self.normalized(ProbabilityWeighting::SymbolLength)
    }

    fn normalized(&self, weighting: ProbabilityWeighting) -> Vec<f64> {
        let mass: Vec<f64> = match weighting {
            ProbabilityWeighting::Raw => self.hits.iter().map(|&h| h as f64).collect(),
            ProbabilityWeighting::SymbolLength => self
                .hits
                .iter()
                .zip(&self.symbol_lens)
                .map(|(&h, &l)| h as f64 * l as f64)
                .collect(),
        };
        let total: f64 = mass.iter().sum();
        if total == 0.0 {
            let n = mass.len().max(1) as f64;
            return vec![1.0 / n; mass.len()];
        }
        mass.into_iter().map(|m| m / total).collect()
    }

    /// Normalized probabilities with `ε = (1/total_lookups)/n` added to every
    /// interval first, so never-hit intervals still get finite codes.
    pub fn smoothed(&self, weighting: ProbabilityWeighting) -> Vec<f64> {
        let base = self.normalized(weighting);
        if self.total_lookups == 0 || base.iter().all(|&p| p > 0.0) {
            return base;
        }
        let eps = 1.0 / self.total_lookups as f64 / base.len() as f64;
        let total = 1.0 + eps * base.len() as f64;
        base.into_iter().map(|p| (p + eps) / total).collect()
    }
}

/// Lookup counts per interval when each sample key is encoded against
/// `division`.
pub fn probe_hits<K: AsRef<[u8]>>(sample: &[K], division: &IntervalDivision) -> Vec<u64> {
    let intervals = division.intervals();
    let mut hits = vec![0u64; intervals.len()];
    for key in sample {
        let key = key.as_ref();
        let mut pos = 0;
        while pos < key.len() {
            let i = division.find(&key[pos..]);
            hits[i] += 1;
            pos += intervals[i].symbol_len.clamp(1, key.len() - pos);
        }
    }
    hits
}

pub fn probe_probabilities<K: AsRef<[u8]>>(
    sample: &[K],
    division: &IntervalDivision,
) -> Result<IntervalProbabilities> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let hits = probe_hits(sample, division);
    let lens = division.intervals().iter().map(|iv| iv.symbol_len).collect();
    Ok(IntervalProbabilities::from_hits(hits, lens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BoundaryString;
    use crate::select::divide::{divide_fixed, divide_ngrams};
    use crate::select::freq::FrequencyTable;

    #[test]
    fn single_char_probe_splits_evenly() {
        let div = divide_fixed(1).unwrap();
        let p = probe_probabilities(&["ab", "ab"], &div).unwrap().probs();
        assert_eq!(p[b'a' as usize], 0.5);
        assert_eq!(p[b'b' as usize], 0.5);
        assert_eq!(p.iter().filter(|&&x| x > 0.0).count(), 2);

        let p = probe_probabilities(&["aa"], &div).unwrap().probs();
        assert_eq!(p[b'a' as usize], 1.0);
    }

    #[test]
    fn repeated_trigram_hits_one_interval() {
        let freq: FrequencyTable = [("ing", 100u64), ("ion", 80)].into_iter().collect();
        let div = divide_ngrams(&freq, 3, 4).unwrap();
        let probe = probe_probabilities(&["inging"], &div).unwrap();
        let ing = div
            .intervals()
            .iter()
            .position(|iv| iv.left == BoundaryString::bare("ing"))
            .unwrap();
        assert_eq!(probe.hits()[ing], 2);
        assert_eq!(probe.probs()[ing], 1.0);
    }

    #[test]
    fn short_tail_is_consumed_whole() {
        // "abc" under Double-Char: "ab", then the terminator gap for "c".
        let div = divide_fixed(2).unwrap();
        let probe = probe_probabilities(&["abc"], &div).unwrap();
        assert_eq!(probe.total_lookups(), 2);
        let gap = div
            .intervals()
            .iter()
            .position(|iv| iv.left == BoundaryString::terminated("c"))
            .unwrap();
        assert_eq!(probe.hits()[gap], 1);
    }

    #[test]
    fn smoothing_gives_every_interval_mass() {
        let probe = IntervalProbabilities::from_hits(vec![3, 0, 1], vec![1, 1, 2]);
        let s = probe.smoothed(ProbabilityWeighting::Raw);
        assert!(s.iter().all(|&p| p > 0.0));
        assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let w = probe.length_weighted();
        assert_eq!(w, vec![0.6, 0.0, 0.4]);
    }

    #[test]
    fn no_hits_means_uniform() {
        let probe = IntervalProbabilities::from_hits(vec![0, 0], vec![1, 1]);
        assert_eq!(probe.smoothed(ProbabilityWeighting::Raw), vec![0.5, 0.5]);
    }

    #[test]
    fn empty_sample_is_rejected() {
        let div = divide_fixed(1).unwrap();
        let empty: [&[u8]; 0] = [];
        assert!(matches!(
            probe_probabilities(&empty, &div),
            Err(Error::EmptySample)
        ));
    }
}
