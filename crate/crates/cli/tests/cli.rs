use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn hope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hope"))
        .args(args)
        .output()
        .expect("run hope")
}

fn ok(args: &[&str]) -> String {
    let out = hope(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(TempDir::new().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }

    fn write(&self, name: &str, body: &[u8]) -> String {
        fs::write(self.path(name), body).unwrap();
        self.s(name)
    }
}

fn gen(dir: &Dir, name: &str, count: usize) -> String {
    let out = dir.s(name);
    ok(&[
        "gen-corpus",
        "--count",
        &count.to_string(),
        "--seed",
        "5",
        "--out",
        &out,
    ]);
    out
}

fn build(dir: &Dir, keys: &str, scheme: &str, extra: &[&str], out: &str) -> Output {
    let out = dir.s(out);
    let mut args = vec!["build", "--keys", keys, "--scheme", scheme, "--out", &out];
    args.extend_from_slice(extra);
    hope(&args)
}

#[test]
fn single_char_from_three_lines() {
    let d = Dir::new();
    let keys = d.write("k.txt", b"alpha\nbeta\ngamma\n");
    let out = build(&d, &keys, "single-char", &[], "d.bin");
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("entries: 256"));

    let dump = ok(&["inspect", "--dict", &d.s("d.bin")]);
    let rows = dump.lines().filter(|l| l.split('\t').count() == 5).count();
    assert_eq!(rows, 256 + 1);
    assert!(dump.contains("scheme: single-char"));
    assert!(dump.contains("kraft_sum: 1.000000000"));
    assert!(dump.trim_end().ends_with("verdict: OK"));
}

#[test]
fn same_seed_gives_identical_files() {
    let d = Dir::new();
    let keys = gen(&d, "k.txt", 3000);
    for name in ["a.bin", "b.bin"] {
        assert!(build(
            &d,
            &keys,
            "alm-improved",
            &["--dict-size", "512", "--seed", "3"],
            name
        )
        .status
        .success());
    }
    assert_eq!(
        fs::read(d.path("a.bin")).unwrap(),
        fs::read(d.path("b.bin")).unwrap()
    );
}

#[test]
fn oversized_limit_is_clamped_with_warning() {
    let d = Dir::new();
    let keys = d.write("k.txt", b"abcdefgh\nabcxyz\n");
    let out = build(&d, &keys, "3-grams", &["--dict-size", "262144"], "d.bin");
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("clamped"));
    let out = build(&d, &keys, "3-grams", &["--dict-size", "262145"], "e.bin");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn encode_decode_round_trip() {
    let d = Dir::new();
    let keys = gen(&d, "k.txt", 2000);
    for scheme in [
        "single-char",
        "double-char",
        "3-grams",
        "4-grams",
        "alm",
        "alm-improved",
    ] {
        assert!(build(
            &d,
            &keys,
            scheme,
            &["--dict-size", "1024", "--sample-fraction", "0.5"],
            "d.bin"
        )
        .status
        .success());
        ok(&[
            "encode",
            "--dict",
            &d.s("d.bin"),
            "--keys",
            &keys,
            "--out",
            &d.s("e.bin"),
        ]);
        ok(&[
            "decode",
            "--dict",
            &d.s("d.bin"),
            "--input",
            &d.s("e.bin"),
            "--out",
            &d.s("r.txt"),
        ]);
        assert_eq!(
            fs::read(&keys).unwrap(),
            fs::read(d.path("r.txt")).unwrap(),
            "{scheme}"
        );
    }
}

#[test]
fn binary_keys_survive_escaping() {
    let d = Dir::new();
    let keys = d.s("k.txt");
    ok(&["gen-corpus", "--count", "300", "--binary", "10", "--out", &keys]);
    assert!(build(
        &d,
        &keys,
        "3-grams",
        &["--dict-size", "64", "--sample-fraction", "1"],
        "d.bin"
    )
    .status
    .success());
    ok(&[
        "encode",
        "--dict",
        &d.s("d.bin"),
        "--keys",
        &keys,
        "--out",
        &d.s("e.bin"),
    ]);
    ok(&[
        "decode",
        "--dict",
        &d.s("d.bin"),
        "--input",
        &d.s("e.bin"),
        "--out",
        &d.s("r.txt"),
    ]);
    assert_eq!(fs::read(&keys).unwrap(), fs::read(d.path("r.txt")).unwrap());
}

#[test]
fn batch_matches_scalar_and_needs_sorted_input() {
    let d = Dir::new();
    let keys = d.write("s.txt", b"com.a@x\ncom.a@y\ncom.ab@z\norg.q@r\n");
    assert!(build(&d, &keys, "double-char", &[], "d.bin").status.success());
    let dict = d.s("d.bin");
    ok(&[
        "encode",
        "--dict",
        &dict,
        "--keys",
        &keys,
        "--out",
        &d.s("one.bin"),
    ]);
    ok(&[
        "encode",
        "--dict",
        &dict,
        "--keys",
        &keys,
        "--out",
        &d.s("b1.bin"),
        "--batch",
        "1",
    ]);
    ok(&[
        "encode",
        "--dict",
        &dict,
        "--keys",
        &keys,
        "--out",
        &d.s("b2.bin"),
        "--batch",
        "2",
    ]);
    let one = fs::read(d.path("one.bin")).unwrap();
    assert_eq!(one, fs::read(d.path("b1.bin")).unwrap());
    assert_eq!(one, fs::read(d.path("b2.bin")).unwrap());

    let unsorted = d.write("u.txt", b"b\na\n");
    let out = hope(&[
        "encode",
        "--dict",
        &dict,
        "--keys",
        &unsorted,
        "--out",
        &d.s("u.bin"),
        "--batch",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsorted"));
}

#[test]
fn empty_input_gives_empty_output() {
    let d = Dir::new();
    let keys = d.write("k.txt", b"seed\n");
    assert!(build(&d, &keys, "single-char", &[], "d.bin").status.success());
    let empty = d.write("empty.txt", b"");
    ok(&[
        "encode",
        "--dict",
        &d.s("d.bin"),
        "--keys",
        &empty,
        "--out",
        &d.s("e.bin"),
    ]);
    assert!(fs::read(d.path("e.bin")).unwrap().is_empty());
}

#[test]
fn corrupt_and_missing_files() {
    let d = Dir::new();
    let keys = d.write("k.txt", b"abc\n");
    assert!(build(&d, &keys, "single-char", &[], "d.bin").status.success());
    let bytes = fs::read(d.path("d.bin")).unwrap();
    let truncated = d.write("t.bin", &bytes[..bytes.len() / 2]);
    let out = hope(&["inspect", "--dict", &truncated]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("checksum"));

    let out = hope(&[
        "encode",
        "--dict",
        &truncated,
        "--keys",
        &keys,
        "--out",
        &d.s("e.bin"),
    ]);
    assert_eq!(out.status.code(), Some(1));

    let mut magic = bytes.clone();
    magic[0] = b'Z';
    let bad = d.write("m.bin", &magic);
    let out = hope(&["inspect", "--dict", &bad]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("magic"));

    let missing = d.s("missing.bin");
    assert_eq!(hope(&["inspect", "--dict", &missing]).status.code(), Some(2));
    assert_eq!(
        hope(&[
            "build",
            "--keys",
            &missing,
            "--scheme",
            "alm",
            "--out",
            &d.s("x.bin")
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn invalid_dictionary_is_reported() {
    let d = Dir::new();
    let keys = d.write("k.txt", b"abc\n");
    assert!(build(&d, &keys, "single-char", &[], "d.bin").status.success());
    let mut bytes = fs::read(d.path("d.bin")).unwrap();
    // Give the second entry the first entry's code, then fix the checksum.
    let n = bytes.len() - 4;
    let first_code = 23 + 2 + 1 + 2;
    let second_code = first_code + 9 + 2 + 1 + 1 + 2;
    let code: Vec<u8> = bytes[first_code..first_code + 9].to_vec();
    bytes[second_code..second_code + 9].copy_from_slice(&code);
    let crc = crc32(&bytes[..n]);
    bytes[n..].copy_from_slice(&crc.to_le_bytes());
    let bad = d.write("bad.bin", &bytes);

    let out = hope(&["inspect", "--dict", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("verdict: OK"));
    let out = hope(&["encode", "--dict", &bad, "--keys", &keys, "--out", &d.s("e.bin")]);
    assert_eq!(out.status.code(), Some(1));
}

/// Bitwise CRC-32 (IEEE), independent of the library's implementation.
fn crc32(data: &[u8]) -> u32 {
    let mut crc = !0u32;
    for &b in data {
        crc ^= b as u32;
        for _ in 0..8 {
            crc = if crc & 1 == 1 {
                (crc >> 1) ^ 0xEDB8_8320
            } else {
                crc >> 1
            };
        }
    }
    !crc
}

fn csv_rows(out: &str) -> Vec<Vec<String>> {
    out.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn bench(keys: &str, extra: &[&str]) -> Vec<Vec<String>> {
    let mut args = vec![
        "bench",
        "--keys",
        keys,
        "--trials",
        "1",
        "--sample-fraction",
        "0.2",
    ];
    args.extend_from_slice(extra);
    csv_rows(&ok(&args))
}

#[test]
fn bench_micro_covers_all_schemes() {
    let d = Dir::new();
    let keys = gen(&d, "k.txt", 3000);
    let rows = bench(&keys, &["--dict-size", "1024"]);
    assert_eq!(rows[0][0], "scheme");
    assert_eq!(rows.len(), 1 + 6);
    assert!(rows.iter().all(|r| r.len() == rows[0].len()));
}

#[test]
fn bench_sample_uses_default_fractions() {
    let d = Dir::new();
    let keys = gen(&d, "k.txt", 2000);
    let rows = bench(&keys, &["--experiment", "sample", "--scheme", "single-char"]);
    let fractions: Vec<&str> = rows[1..].iter().map(|r| r[1].as_str()).collect();
    assert_eq!(fractions, ["0.0001", "0.001", "0.01", "0.1", "1"]);
}

#[test]
fn bench_batch_and_drift() {
    let d = Dir::new();
    let keys = gen(&d, "k.txt", 2000);
    let rows = bench(
        &keys,
        &[
            "--experiment",
            "batch",
            "--scheme",
            "double",
            "--block-sizes",
            "1,2,32",
        ],
    );
    assert_eq!(rows.len(), 1 + 4);

    let out = hope(&["bench", "--keys", &keys, "--experiment", "drift"]);
    assert_eq!(out.status.code(), Some(1));
    let rows = bench(
        &keys,
        &[
            "--experiment",
            "drift",
            "--split",
            "gmail",
            "--scheme",
            "4-grams",
            "--dict-size",
            "512",
        ],
    );
    assert_eq!(rows.len(), 1 + 4);
}

#[test]
fn bad_arguments_fail() {
    assert_eq!(hope(&["build"]).status.code(), Some(1));
    assert_eq!(hope(&["--help"]).status.code(), Some(0));
    let d = Dir::new();
    let keys = d.write("k.txt", b"a\n");
    assert!(
        !hope(&["build", "--keys", &keys, "--scheme", "5-grams", "--out", "x"])
            .status
            .success()
    );
    assert!(Path::new(&keys).exists());
}
