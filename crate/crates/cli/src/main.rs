use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use hope::bench::{self, BatchRow, MicroRow, SampleRow};
use hope::codec::Decoder;
use hope::corpus::{generate_emails, random_binary_keys, split_by_substring};
use hope::format::{encoded_from_bytes, encoded_to_bytes, load_dictionary, save_dictionary};
use hope::keyfile::{read_key_file, write_key_file};
use hope::pipeline::{build_from_corpus, SchemeConfig, MAX_DICT_SIZE, MIN_DICT_SIZE};
use hope::{Dictionary, Scheme};

#[derive(Parser)]
#[command(name = "hope", version, about = "Order-preserving key compression")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a dictionary from a key file.
    Build {
        #[arg(long)]
        keys: PathBuf,
        #[arg(long, value_parser = parse_scheme)]
        scheme: Scheme,
        /// Entry target for 3-Grams, 4-Grams, ALM and ALM-Improved.
        #[arg(long, default_value_t = 1 << 16)]
        dict_size: usize,
        #[arg(long, default_value_t = 0.01)]
        sample_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encode a key file into concatenated wire records.
    Encode {
        #[arg(long)]
        dict: PathBuf,
        #[arg(long)]
        keys: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Encode sorted input in blocks of this size.
        #[arg(long)]
        batch: Option<usize>,
    },
    /// Decode wire records back into a key file.
    Decode {
        #[arg(long)]
        dict: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a benchmark and print CSV.
    Bench {
        #[arg(long)]
        keys: PathBuf,
        /// Schemes to run; all six when omitted.
        #[arg(long = "scheme", value_parser = parse_scheme)]
        schemes: Vec<Scheme>,
        #[arg(long = "dict-size", default_values_t = [1usize << 16])]
        dict_sizes: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Experiment::Micro)]
        experiment: Experiment,
        /// Keys containing any of these substrings form corpus A (drift).
        #[arg(long = "split")]
        split: Vec<String>,
        #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_FRACTIONS)]
        fractions: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 4, 8, 16, 32, 64])]
        block_sizes: Vec<usize>,
        #[arg(long, default_value_t = 0.01)]
        sample_fraction: f64,
        #[arg(long, default_value_t = bench::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a dictionary and check it.
    Inspect {
        #[arg(long)]
        dict: PathBuf,
    },
    /// Write a synthetic key file.
    GenCorpus {
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random binary keys up to this length instead of emails.
        #[arg(long)]
        binary: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    Micro,
    Sample,
    Batch,
    Drift,
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    s.parse().map_err(|e: hope::Error| e.to_string())
}

/// A dictionary that loaded but broke an invariant.
#[derive(Debug)]
struct Invalid(String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid dictionary: {}", self.0)
    }
}

impl std::error::Error for Invalid {}

fn load_valid(path: &Path) -> Result<Dictionary> {
    let dict = load_dictionary(path).with_context(|| format!("loading {}", path.display()))?;
    let report = dict.validate();
    if !report.is_valid() {
        return Err(Invalid(report.to_string()).into());
    }
    Ok(dict)
}

fn read_keys(path: &Path) -> Result<Vec<Vec<u8>>> {
    read_key_file(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_build(
    keys: &Path,
    scheme: Scheme,
    dict_size: usize,
    sample_fraction: f64,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let corpus = read_keys(keys)?;
    let mut cfg = SchemeConfig::new(scheme)
        .with_sample_fraction(sample_fraction)
        .with_seed(seed);
    cfg.dict_size_limit = dict_size;
    let built = build_from_corpus(&corpus, &cfg)?;
    let n = built.dictionary.len();
    if !scheme.has_fixed_size() {
        if n < dict_size {
            eprintln!("warning: the sample supports only {n} entries; size limit {dict_size} clamped");
        } else if n > dict_size {
            eprintln!(
                "warning: the smallest reachable dictionary has {n} entries; size limit {dict_size} raised"
            );
        }
    }
    save_dictionary(&built.dictionary, out).with_context(|| format!("writing {}", out.display()))?;
    let t = built.timings;
    println!("scheme: {scheme}");
    println!("entries: {n}");
    println!("structure: {}", built.encoder.structure().kind());
    println!(
        "build_ms: select {:.3} assign {:.3} dictionary {:.3} total {:.3}",
        t.symbol_select.as_secs_f64() * 1e3,
        t.code_assign.as_secs_f64() * 1e3,
        t.dictionary.as_secs_f64() * 1e3,
        t.total().as_secs_f64() * 1e3
    );
    Ok(())
}

fn cmd_encode(dict: &Path, keys: &Path, out: &Path, batch: Option<usize>) -> Result<()> {
    let dict = load_valid(dict)?;
    let keys = read_keys(keys)?;
    let encoder = hope::pipeline::make_encoder(&dict)?;
    let encoded = match batch {
        Some(b) => {
            if let Some(i) = keys.windows(2).position(|w| w[0] > w[1]) {
                bail!("unsorted input: key {} sorts before key {}", i + 2, i + 1);
            }
            encoder.encode_batch(&keys, b)?
        }
        None => keys.iter().map(|k| encoder.encode(k)).collect(),
    };
    std::fs::write(out, encoded_to_bytes(&encoded)).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn cmd_decode(dict: &Path, input: &Path, out: &Path) -> Result<()> {
    let dict = load_valid(dict)?;
    let bytes = std::fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let decoder = Decoder::new(&dict)?;
    let keys = encoded_from_bytes(&bytes)?
        .iter()
        .map(|k| decoder.decode(k))
        .collect::<hope::Result<Vec<_>>>()?;
    write_key_file(out, &keys).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    keys: &Path,
    schemes: &[Scheme],
    dict_sizes: &[usize],
    experiment: Experiment,
    split: &[String],
    fractions: &[f64],
    block_sizes: &[usize],
    sample_fraction: f64,
    trials: usize,
    seed: u64,
) -> Result<String> {
    let corpus = read_keys(keys)?;
    let schemes = if schemes.is_empty() {
        &Scheme::ALL[..]
    } else {
        schemes
    };
    if dict_sizes.is_empty() {
        bail!("at least one --dict-size is required");
    }
    let base = SchemeConfig::new(schemes[0])
        .with_sample_fraction(sample_fraction)
        .with_seed(seed);
    let mut configs = Vec::new();
    for &scheme in schemes {
        let sizes = if scheme.has_fixed_size() {
            &dict_sizes[..1]
        } else {
            dict_sizes
        };
        for &l in sizes {
            configs.push(SchemeConfig {
                scheme,
                dict_size_limit: l,
                ..base.clone()
            });
        }
    }
    let mut csv = String::new();
    match experiment {
        Experiment::Micro => {
            writeln!(csv, "{}", MicroRow::CSV_HEADER)?;
            for row in bench::micro(&corpus, schemes, dict_sizes, &base, trials)? {
                writeln!(csv, "{}", row.csv())?;
            }
        }
        Experiment::Sample => {
            writeln!(csv, "{}", SampleRow::CSV_HEADER)?;
            for cfg in &configs {
                for row in bench::sweep_sample_size(&corpus, fractions, cfg)? {
                    writeln!(csv, "{}", row.csv())?;
                }
            }
        }
        Experiment::Batch => {
            writeln!(csv, "{}", BatchRow::CSV_HEADER)?;
            for cfg in &configs {
                for row in bench::batch_sweep(&corpus, block_sizes, cfg, trials)? {
                    writeln!(csv, "{}", row.csv())?;
                }
            }
        }
        Experiment::Drift => {
            if split.is_empty() {
                bail!("the drift experiment needs at least one --split substring");
            }
            let needles: Vec<&[u8]> = split.iter().map(|s| s.as_bytes()).collect();
            let (a, b) = split_by_substring(&corpus, &needles);
            if a.is_empty() || b.is_empty() {
                bail!("--split leaves one side empty ({} / {} keys)", a.len(), b.len());
            }
            writeln!(csv, "{}", hope::bench::DriftMatrix::CSV_HEADER)?;
            for cfg in &configs {
                for line in bench::distribution_change_matrix(&a, &b, cfg)?.csv_rows() {
                    writeln!(csv, "{line}")?;
                }
            }
        }
    }
    Ok(csv)
}

fn hex(bytes: &[u8]) -> String {
    if bytes.is_empty() {
        return "-".into();
    }
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn cmd_inspect(path: &Path) -> Result<String> {
    let dict = load_dictionary(path).with_context(|| format!("loading {}", path.display()))?;
    let mut s = String::new();
    writeln!(s, "scheme: {}", dict.scheme())?;
    writeln!(s, "entries: {}", dict.len())?;
    writeln!(s, "seed: {}", dict.seed())?;
    writeln!(s, "index\tboundary_hex\tterminated\tsymbol_len\tcode")?;
    for (i, e) in dict.entries().iter().enumerate() {
        writeln!(
            s,
            "{i}\t{}\t{}\t{}\t{}",
            hex(&e.left_boundary.bytes),
            e.left_boundary.terminated as u8,
            e.symbol_len,
            e.code
        )?;
    }
    writeln!(s, "kraft_sum: {:.9}", dict.kraft_sum())?;
    writeln!(s, "max_code_len: {}", dict.max_code_len())?;
    let report = dict.validate();
    writeln!(s, "verdict: {report}")?;
    if !report.is_valid() {
        io::stdout().write_all(s.as_bytes())?;
        return Err(Invalid(report.to_string()).into());
    }
    Ok(s)
}

fn cmd_gen_corpus(count: usize, seed: u64, binary: Option<usize>, out: &Path) -> Result<()> {
    let keys = match binary {
        Some(max_len) => random_binary_keys(count, max_len, seed),
        None => generate_emails(count, seed),
    };
    write_key_file(out, &keys).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let stdout = |s: String| -> Result<()> {
        io::stdout().write_all(s.as_bytes())?;
        Ok(())
    };
    match cli.command {
        Command::Build {
            keys,
            scheme,
            dict_size,
            sample_fraction,
            seed,
            out,
        } => {
            if !(MIN_DICT_SIZE..=MAX_DICT_SIZE).contains(&dict_size) {
                bail!("--dict-size must be within [{MIN_DICT_SIZE}, {MAX_DICT_SIZE}]");
            }
            cmd_build(&keys, scheme, dict_size, sample_fraction, seed, &out)
        }
        Command::Encode {
            dict,
            keys,
            out,
            batch,
        } => cmd_encode(&dict, &keys, &out, batch),
        Command::Decode { dict, input, out } => cmd_decode(&dict, &input, &out),
        Command::Bench {
            keys,
            schemes,
            dict_sizes,
            experiment,
            split,
            fractions,
            block_sizes,
            sample_fraction,
            trials,
            seed,
        } => stdout(cmd_bench(
            &keys,
            &schemes,
            &dict_sizes,
            experiment,
            &split,
            &fractions,
            &block_sizes,
            sample_fraction,
            trials,
            seed,
        )?),
        Command::Inspect { dict } => stdout(cmd_inspect(&dict)?),
        Command::GenCorpus {
            count,
            seed,
            binary,
            out,
        } => cmd_gen_corpus(count, seed, binary, &out),
    }
}

/// 2 for I/O failures, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    let io = err
        .chain()
        .any(|e| e.is::<io::Error>() || matches!(e.downcast_ref::<hope::Error>(), Some(hope::Error::Io(_))));
    if io {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors.
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
