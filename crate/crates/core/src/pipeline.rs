//! Build phase: symbol selection on a key sample, then code assignment and
//! the lookup structure.

use std::time::{Duration, Instant};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::assign::{assign_fixed, assign_hu_tucker};
use crate::codec::Encoder;
use crate::error::{Error, Result};
use crate::model::{Dictionary, Scheme};
use crate::select::{
    blend, count_all_substrings, count_fixed, count_suffixes, divide_alm, divide_fixed, divide_ngrams,
    equalize, probe_probabilities, search_alm_threshold, FrequencyTable, IntervalDivision,
    ProbabilityWeighting,
};

pub const MIN_DICT_SIZE: usize = 1 << 4;
pub const MAX_DICT_SIZE: usize = 1 << 18;

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    /// Target entry count for the n-gram and ALM schemes. Ignored by Single-
    /// and Double-Char, whose sizes are fixed.
    pub dict_size_limit: usize,
    pub sample_fraction: f64,
    pub alm_max_substring_len: usize,
    /// Mass handed to Hu-Tucker.
    pub weighting: ProbabilityWeighting,
    pub seed: u64,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme) -> Self {
        SchemeConfig {
            scheme,
            dict_size_limit: 1 << 16,
            sample_fraction: 0.01,
            alm_max_substring_len: 32,
            weighting: ProbabilityWeighting::Raw,
            seed: 0,
        }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.dict_size_limit = limit;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_sample_fraction(mut self, fraction: f64) -> Self {
        self.sample_fraction = fraction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_DICT_SIZE..=MAX_DICT_SIZE).contains(&self.dict_size_limit) {
            return Err(Error::InvalidConfig(format!(
                "dictionary size limit {} outside [{MIN_DICT_SIZE}, {MAX_DICT_SIZE}]",
                self.dict_size_limit
            )));
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "sample fraction {} outside (0, 1]",
                self.sample_fraction
            )));
        }
        if self.alm_max_substring_len == 0 {
            return Err(Error::InvalidConfig(
                "ALM substring bound must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Wall time per build stage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildTimings {
    pub symbol_select: Duration,
    pub code_assign: Duration,
    pub dictionary: Duration,
}

impl BuildTimings {
    pub fn total(&self) -> Duration {
        self.symbol_select + self.code_assign + self.dictionary
    }
}

/// A built dictionary with its encoder.
#[derive(Clone, Debug)]
pub struct Built {
    pub dictionary: Dictionary,
    pub encoder: Encoder,
    pub timings: BuildTimings,
}

/// Uniform sample without replacement, in corpus order. At least one key is
/// drawn from a non-empty corpus; a fraction of 1 returns every key.
pub fn sample_keys<K: AsRef<[u8]>>(corpus: &[K], fraction: f64, seed: u64) -> Vec<Vec<u8>> {
    let n = corpus.len();
    if n == 0 {
        return Vec::new();
    }
    let k = ((n as f64 * fraction).round() as usize).clamp(1, n);
    if k == n {
        return corpus.iter().map(|key| key.as_ref().to_vec()).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, n, k).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| corpus[i].as_ref().to_vec()).collect()
}

/// The 256 one-byte intervals, used when a sample yields no pattern at all.
fn byte_layout() -> IntervalDivision {
    divide_fixed(1).expect("one-byte layout")
}

fn select<K: AsRef<[u8]>>(sample: &[K], cfg: &SchemeConfig) -> Result<IntervalDivision> {
    let limit = cfg.dict_size_limit;
    match cfg.scheme {
        Scheme::SingleChar => divide_fixed(1),
        Scheme::DoubleChar => divide_fixed(2),
        Scheme::ThreeGrams | Scheme::FourGrams => {
            let g = cfg.scheme.gram_len().expect("n-gram scheme");
            let freq = count_fixed(sample, g)?;
            if freq.is_empty() {
                return Ok(byte_layout());
            }
            divide_ngrams(&freq, g, limit & !1)
        }
        Scheme::Alm | Scheme::AlmImproved => {
            let raw = if cfg.scheme == Scheme::Alm {
                count_all_substrings(sample, cfg.alm_max_substring_len)?
            } else {
                count_suffixes(sample, cfg.alm_max_substring_len)?
            };
            let freq = blend(&raw);
            if freq.is_empty() {
                return Ok(byte_layout());
            }
            let div = divide_alm(&freq, alm_threshold(&freq, limit)?)?;
            let target = limit.max(div.len());
            Ok(equalize(div, sample, target))
        }
    }
}

/// Threshold for the largest division within `limit`, or for the smallest
/// reachable division when `limit` is below it.
fn alm_threshold(freq: &FrequencyTable, limit: usize) -> Result<u64> {
    match search_alm_threshold(freq, limit) {
        Err(Error::TargetUnreachable { minimum, .. }) => search_alm_threshold(freq, minimum),
        other => other,
    }
}

/// Runs the build phase on an already sampled key set.
pub fn build<K: AsRef<[u8]>>(sample: &[K], cfg: &SchemeConfig) -> Result<Built> {
    cfg.validate()?;
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let t0 = Instant::now();
    let division = select(sample, cfg)?;
    let probs = probe_probabilities(sample, &division)?;
    let t1 = Instant::now();
    let codes = if cfg.scheme.uses_fixed_codes() {
        assign_fixed(division.len())
    } else {
        assign_hu_tucker(&probs.smoothed(cfg.weighting))?
    };
    let dictionary = division.into_dictionary(cfg.scheme, &codes).with_seed(cfg.seed);
    let t2 = Instant::now();
    let encoder = Encoder::new(&dictionary)?;
    let t3 = Instant::now();
    Ok(Built {
        dictionary,
        encoder,
        timings: BuildTimings {
            symbol_select: t1 - t0,
            code_assign: t2 - t1,
            dictionary: t3 - t2,
        },
    })
}

pub fn build_dictionary<K: AsRef<[u8]>>(
    sample: &[K],
    cfg: &SchemeConfig,
) -> Result<(Dictionary, BuildTimings)> {
    let built = build(sample, cfg)?;
    Ok((built.dictionary, built.timings))
}

/// Samples `corpus` per `cfg` and builds on the sample.
pub fn build_from_corpus<K: AsRef<[u8]>>(corpus: &[K], cfg: &SchemeConfig) -> Result<Built> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let sample = sample_keys(corpus, cfg.sample_fraction, cfg.seed);
    build(&sample, cfg)
}

pub fn make_encoder(dict: &Dictionary) -> Result<Encoder> {
    Encoder::new(dict)
}
