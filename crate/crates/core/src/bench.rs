//! Compression and latency measurements, and the experiments built on them.
//! Everything runs on the calling thread.

use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{BitBuffer, Encoder};
use crate::error::{Error, Result};
use crate::model::Scheme;
use crate::pipeline::{build, build_from_corpus, sample_keys, BuildTimings, SchemeConfig};

pub const DEFAULT_TRIALS: usize = 3;
pub const DEFAULT_FRACTIONS: [f64; 5] = [0.0001, 0.001, 0.01, 0.1, 1.0];
pub const ORDER_CHECK_PAIRS: usize = 1000;

/// Source and encoded sizes of a corpus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Compression {
    pub source_bytes: u64,
    pub encoded_bits: u64,
    /// Sum of per-key sizes rounded up to whole bytes.
    pub encoded_bytes_rounded: u64,
}

impl Compression {
    /// Source bytes over encoded bits / 8. An all-empty corpus reports 1.
    pub fn cpr(&self) -> f64 {
        if self.encoded_bits == 0 {
            return if self.source_bytes == 0 {
                1.0
            } else {
                f64::INFINITY
            };
        }
        self.source_bytes as f64 * 8.0 / self.encoded_bits as f64
    }

    pub fn cpr_rounded(&self) -> f64 {
        if self.encoded_bytes_rounded == 0 {
            return if self.source_bytes == 0 {
                1.0
            } else {
                f64::INFINITY
            };
        }
        self.source_bytes as f64 / self.encoded_bytes_rounded as f64
    }
}

pub fn compression<K: AsRef<[u8]>>(encoder: &Encoder, corpus: &[K]) -> Result<Compression> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut buf = BitBuffer::new();
    let mut c = Compression {
        source_bytes: 0,
        encoded_bits: 0,
        encoded_bytes_rounded: 0,
    };
    for k in corpus {
        buf.clear();
        encoder.encode_into(k.as_ref(), &mut buf);
        let bits = buf.bit_len() as u64;
        c.source_bytes += k.as_ref().len() as u64;
        c.encoded_bits += bits;
        c.encoded_bytes_rounded += bits.div_ceil(8);
    }
    Ok(c)
}

pub fn measure_cpr<K: AsRef<[u8]>>(encoder: &Encoder, corpus: &[K]) -> Result<f64> {
    Ok(compression(encoder, corpus)?.cpr())
}

fn source_bytes<K: AsRef<[u8]>>(corpus: &[K]) -> usize {
    corpus.iter().map(|k| k.as_ref().len()).sum::<usize>().max(1)
}

fn mean_ns_per_byte(total: Duration, trials: usize, bytes: usize) -> f64 {
    total.as_nanos() as f64 / trials as f64 / bytes as f64
}

/// Mean wall time per source byte of encoding every key, over `trials` runs.
pub fn measure_latency<K: AsRef<[u8]>>(encoder: &Encoder, corpus: &[K], trials: usize) -> Result<f64> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let trials = trials.max(1);
    let mut buf = BitBuffer::new();
    let mut total = Duration::ZERO;
    for _ in 0..trials {
        let t = Instant::now();
        for k in corpus {
            buf.clear();
            encoder.encode_into(black_box(k.as_ref()), &mut buf);
            black_box(buf.bit_len());
        }
        total += t.elapsed();
    }
    Ok(mean_ns_per_byte(total, trials, source_bytes(corpus)))
}

/// Like [`measure_latency`] with the scalar path producing owned keys, so it
/// is comparable to [`measure_batch_latency`].
pub fn measure_scalar_latency<K: AsRef<[u8]>>(encoder: &Encoder, corpus: &[K], trials: usize) -> Result<f64> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let trials = trials.max(1);
    let mut total = Duration::ZERO;
    for _ in 0..trials {
        let t = Instant::now();
        let out: Vec<_> = corpus
            .iter()
            .map(|k| encoder.encode(black_box(k.as_ref())))
            .collect();
        total += t.elapsed();
        black_box(out);
    }
    Ok(mean_ns_per_byte(total, trials, source_bytes(corpus)))
}

/// `sorted` must be in non-decreasing order.
pub fn measure_batch_latency<K: AsRef<[u8]>>(
    encoder: &Encoder,
    sorted: &[K],
    block_size: usize,
    trials: usize,
) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let trials = trials.max(1);
    let mut total = Duration::ZERO;
    for _ in 0..trials {
        let t = Instant::now();
        let out = encoder.encode_batch(black_box(sorted), block_size)?;
        total += t.elapsed();
        black_box(out);
    }
    Ok(mean_ns_per_byte(total, trials, source_bytes(sorted)))
}

pub fn build_breakdown<K: AsRef<[u8]>>(sample: &[K], cfg: &SchemeConfig) -> Result<BuildTimings> {
    Ok(build(sample, cfg)?.timings)
}

/// Checks `pairs` random key pairs from `corpus` for order preservation.
/// Each pair is also compared against its own prefix so that short-prefix
/// pairs are always covered.
pub fn check_order<K: AsRef<[u8]>>(encoder: &Encoder, corpus: &[K], pairs: usize, seed: u64) -> Result<()> {
    if corpus.is_empty() {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..pairs {
        let a = corpus[rng.gen_range(0..corpus.len())].as_ref();
        let b = corpus[rng.gen_range(0..corpus.len())].as_ref();
        let cut = &a[..rng.gen_range(0..=a.len())];
        for (x, y) in [(a, b), (cut, a)] {
            let (ex, ey) = (encoder.encode(x), encoder.encode(y));
            if x.cmp(y) != ex.cmp(&ey) {
                return Err(Error::OrderViolation { index: i });
            }
        }
    }
    Ok(())
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// One row of the compression microbenchmark.
#[derive(Clone, Debug, PartialEq)]
pub struct MicroRow {
    pub scheme: Scheme,
    pub dict_size_limit: Option<usize>,
    pub dict_entries: usize,
    pub cpr: f64,
    pub cpr_rounded: f64,
    pub ns_per_byte: f64,
    pub dict_bytes: usize,
    pub timings: BuildTimings,
}

impl MicroRow {
    pub const CSV_HEADER: &'static str =
        "scheme,dict_size_limit,dict_entries,cpr,cpr_rounded,ns_per_byte,dict_bytes,build_ms_select,build_ms_assign,build_ms_dict,build_ms_total";

    pub fn csv(&self) -> String {
        let limit = self.dict_size_limit.map(|l| l.to_string()).unwrap_or_default();
        format!(
            "{},{limit},{},{:.4},{:.4},{:.2},{},{:.3},{:.3},{:.3},{:.3}",
            self.scheme,
            self.dict_entries,
            self.cpr,
            self.cpr_rounded,
            self.ns_per_byte,
            self.dict_bytes,
            ms(self.timings.symbol_select),
            ms(self.timings.code_assign),
            ms(self.timings.dictionary),
            ms(self.timings.total()),
        )
    }
}

/// Builds each scheme from a sample of `corpus` and measures it on the whole
/// corpus. Fixed-size schemes get one row; the others get one per limit.
pub fn micro<K: AsRef<[u8]>>(
    corpus: &[K],
    schemes: &[Scheme],
    limits: &[usize],
    base: &SchemeConfig,
    trials: usize,
) -> Result<Vec<MicroRow>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let sample = sample_keys(corpus, base.sample_fraction, base.seed);
    let mut rows = Vec::new();
    for &scheme in schemes {
        let limits: Vec<Option<usize>> = if scheme.has_fixed_size() || limits.is_empty() {
            vec![None]
        } else {
            limits.iter().copied().map(Some).collect()
        };
        for limit in limits {
            let mut cfg = base.clone();
            cfg.scheme = scheme;
            if let Some(l) = limit {
                cfg.dict_size_limit = l;
            }
            let built = build(&sample, &cfg)?;
            check_order(&built.encoder, corpus, ORDER_CHECK_PAIRS, cfg.seed)?;
            let c = compression(&built.encoder, corpus)?;
            rows.push(MicroRow {
                scheme,
                dict_size_limit: limit,
                dict_entries: built.dictionary.len(),
                cpr: c.cpr(),
                cpr_rounded: c.cpr_rounded(),
                ns_per_byte: measure_latency(&built.encoder, corpus, trials)?,
                dict_bytes: built.encoder.structure().memory_footprint(),
                timings: built.timings,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleRow {
    pub scheme: Scheme,
    pub fraction: f64,
    pub sample_keys: usize,
    pub dict_entries: usize,
    pub cpr: f64,
}

impl SampleRow {
    pub const CSV_HEADER: &'static str = "scheme,sample_fraction,sample_keys,dict_entries,cpr";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{:.4}",
            self.scheme, self.fraction, self.sample_keys, self.dict_entries, self.cpr
        )
    }
}

/// CPR on the whole corpus for dictionaries built from each sample fraction.
pub fn sweep_sample_size<K: AsRef<[u8]>>(
    corpus: &[K],
    fractions: &[f64],
    cfg: &SchemeConfig,
) -> Result<Vec<SampleRow>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    fractions
        .iter()
        .map(|&fraction| {
            let cfg = cfg.clone().with_sample_fraction(fraction);
            cfg.validate()?;
            let sample = sample_keys(corpus, fraction, cfg.seed);
            let built = build(&sample, &cfg)?;
            check_order(&built.encoder, corpus, ORDER_CHECK_PAIRS, cfg.seed)?;
            Ok(SampleRow {
                scheme: cfg.scheme,
                fraction,
                sample_keys: sample.len(),
                dict_entries: built.dictionary.len(),
                cpr: measure_cpr(&built.encoder, corpus)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BatchRow {
    pub scheme: Scheme,
    /// 0 is the scalar baseline.
    pub block_size: usize,
    pub ns_per_byte: f64,
}

impl BatchRow {
    pub const CSV_HEADER: &'static str = "scheme,block_size,ns_per_byte";

    pub fn csv(&self) -> String {
        format!("{},{},{:.2}", self.scheme, self.block_size, self.ns_per_byte)
    }
}

/// Scalar latency followed by batch latency per block size, on the sorted
/// corpus. Batch output is checked against scalar output first.
pub fn batch_sweep<K: AsRef<[u8]>>(
    corpus: &[K],
    block_sizes: &[usize],
    cfg: &SchemeConfig,
    trials: usize,
) -> Result<Vec<BatchRow>> {
    let built = build_from_corpus(corpus, cfg)?;
    let mut sorted: Vec<&[u8]> = corpus.iter().map(|k| k.as_ref()).collect();
    sorted.sort_unstable();
    check_order(&built.encoder, &sorted, ORDER_CHECK_PAIRS, cfg.seed)?;
    let scalar: Vec<_> = sorted.iter().map(|k| built.encoder.encode(k)).collect();
    let mut rows = vec![BatchRow {
        scheme: cfg.scheme,
        block_size: 0,
        ns_per_byte: measure_scalar_latency(&built.encoder, &sorted, trials)?,
    }];
    for &b in block_sizes {
        if built.encoder.encode_batch(&sorted, b)? != scalar {
            return Err(Error::InvalidConfig(format!(
                "batch output differs from scalar at block size {b}"
            )));
        }
        rows.push(BatchRow {
            scheme: cfg.scheme,
            block_size: b,
            ns_per_byte: measure_batch_latency(&built.encoder, &sorted, b, trials)?,
        });
    }
    Ok(rows)
}

/// `cpr[d][c]`: dictionary built on corpus `d`, measured on corpus `c`, with
/// index 0 for A and 1 for B.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriftMatrix {
    pub scheme: Scheme,
    pub cpr: [[f64; 2]; 2],
}

impl DriftMatrix {
    pub const CSV_HEADER: &'static str = "scheme,dict,corpus,cpr";

    pub fn csv_rows(&self) -> Vec<String> {
        let name = ["A", "B"];
        let mut out = Vec::with_capacity(4);
        for d in 0..2 {
            for c in 0..2 {
                out.push(format!(
                    "{},{},{},{:.4}",
                    self.scheme, name[d], name[c], self.cpr[d][c]
                ));
            }
        }
        out
    }

    /// Relative CPR loss of each dictionary on the other corpus, averaged.
    pub fn mean_drop(&self) -> f64 {
        let a = 1.0 - self.cpr[0][1] / self.cpr[1][1];
        let b = 1.0 - self.cpr[1][0] / self.cpr[0][0];
        (a + b) / 2.0
    }
}

pub fn distribution_change_matrix<K: AsRef<[u8]>>(
    corpus_a: &[K],
    corpus_b: &[K],
    cfg: &SchemeConfig,
) -> Result<DriftMatrix> {
    let a = build_from_corpus(corpus_a, cfg)?;
    let b = build_from_corpus(corpus_b, cfg)?;
    let mut cpr = [[0.0; 2]; 2];
    for (d, built) in [&a, &b].into_iter().enumerate() {
        for (c, corpus) in [corpus_a, corpus_b].into_iter().enumerate() {
            check_order(&built.encoder, corpus, ORDER_CHECK_PAIRS, cfg.seed)?;
            cpr[d][c] = measure_cpr(&built.encoder, corpus)?;
        }
    }
    Ok(DriftMatrix {
        scheme: cfg.scheme,
        cpr,
    })
}
