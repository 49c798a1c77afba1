//! Symbol selection: pattern statistics and the interval divisions built
//! from them.

pub mod divide;
pub mod freq;
pub mod probe;

pub use divide::{
    divide_alm, divide_fixed, divide_ngrams, divide_ngrams_over, equalize, search_alm_threshold, Interval,
    IntervalDivision,
};
pub use freq::{blend, count_all_substrings, count_fixed, count_suffixes, FrequencyTable};
pub use probe::{probe_hits, probe_probabilities, IntervalProbabilities, ProbabilityWeighting};
