//! Synthetic key corpora.
//!
//! The email generator produces host-reversed addresses such as
//! `com.gmail@jane.doe42`, averaging a little over 20 bytes, with a skewed
//! provider mix so that provider-based splits behave like a distribution
//! change.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PROVIDERS: &[(&str, u32)] = &[
    ("com.gmail", 30),
    ("com.yahoo", 18),
    ("com.hotmail", 12),
    ("com.outlook", 8),
    ("com.aol", 4),
    ("net.comcast", 3),
    ("com.icloud", 3),
    ("de.web", 2),
    ("fr.orange", 2),
    ("ru.mail", 2),
];

const TLDS: &[&str] = &["com", "org", "net", "edu", "io", "de", "co.uk"];

const FIRST: &[&str] = &[
    "james",
    "mary",
    "john",
    "patricia",
    "robert",
    "jennifer",
    "michael",
    "linda",
    "william",
    "elizabeth",
    "david",
    "barbara",
    "richard",
    "susan",
    "joseph",
    "jessica",
    "thomas",
    "sarah",
    "charles",
    "karen",
    "daniel",
    "nancy",
    "matthew",
    "lisa",
    "anthony",
    "betty",
    "mark",
    "sandra",
    "donald",
    "ashley",
    "steven",
    "kimberly",
    "paul",
    "emily",
    "andrew",
    "donna",
    "joshua",
    "michelle",
    "kevin",
    "carol",
    "brian",
    "amanda",
    "george",
    "melissa",
    "timothy",
    "deborah",
    "ronald",
    "stephanie",
    "jason",
    "rebecca",
    "wei",
    "li",
    "ana",
    "luis",
    "maria",
    "jose",
    "yuki",
    "hiro",
    "olga",
    "ivan",
];

const LAST: &[&str] = &[
    "smith",
    "johnson",
    "williams",
    "brown",
    "jones",
    "garcia",
    "miller",
    "davis",
    "rodriguez",
    "martinez",
    "hernandez",
    "lopez",
    "gonzalez",
    "wilson",
    "anderson",
    "thomas",
    "taylor",
    "moore",
    "jackson",
    "martin",
    "lee",
    "perez",
    "thompson",
    "white",
    "harris",
    "sanchez",
    "clark",
    "ramirez",
    "lewis",
    "robinson",
    "walker",
    "young",
    "allen",
    "king",
    "wright",
    "scott",
    "torres",
    "nguyen",
    "hill",
    "flores",
    "chen",
    "wang",
    "zhao",
    "kim",
    "park",
    "singh",
    "kumar",
    "ivanov",
    "muller",
    "schmidt",
];

const WORDS: &[&str] = &[
    "star", "moon", "blue", "dark", "cool", "happy", "lucky", "tiger", "dragon", "angel", "music", "soccer",
    "gamer", "pixel", "ninja", "rock", "sun", "sky", "wolf", "fox", "red", "green", "silver", "gold",
];

const COMPANY: &[&str] = &[
    "acme",
    "globex",
    "initech",
    "umbrella",
    "hooli",
    "stark",
    "wayne",
    "tyrell",
    "cyberdyne",
    "wonka",
    "vandelay",
    "soylent",
    "oscorp",
    "aperture",
    "massive",
    "dunder",
    "prestige",
    "nakatomi",
    "gringotts",
    "monarch",
];

fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items[rng.gen_range(0..items.len())]
}

fn username<R: Rng>(rng: &mut R) -> String {
    let first = pick(rng, FIRST);
    let last = pick(rng, LAST);
    let mut s = match rng.gen_range(0..6) {
        0 => format!("{first}.{last}"),
        1 => format!("{first}{last}"),
        2 => format!("{}{last}", &first[..1]),
        3 => format!("{first}_{last}"),
        4 => format!("{}{}", pick(rng, WORDS), pick(rng, WORDS)),
        _ => first.to_string(),
    };
    match rng.gen_range(0..10) {
        0..=3 => {}
        4..=6 => s.push_str(&rng.gen_range(1..100).to_string()),
        7 | 8 => s.push_str(&rng.gen_range(1960..2010).to_string()),
        _ => s.push_str(&rng.gen_range(100..10000).to_string()),
    }
    s
}

fn host<R: Rng>(rng: &mut R, providers: &WeightedIndex<u32>) -> String {
    // One in five addresses belongs to a company or university domain.
    if rng.gen_range(0..5) == 0 {
        let tld = pick(rng, TLDS);
        let reversed_tld: Vec<&str> = tld.split('.').rev().collect();
        format!("{}.{}", reversed_tld.join("."), pick(rng, COMPANY))
    } else {
        PROVIDERS[providers.sample(rng)].0.to_string()
    }
}

/// `n` host-reversed email addresses, deterministic in `seed`. Duplicates
/// are possible, as in real address lists.
pub fn generate_emails(n: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let providers = WeightedIndex::new(PROVIDERS.iter().map(|p| p.1)).expect("positive weights");
    (0..n)
        .map(|_| {
            let h = host(&mut rng, &providers);
            let u = username(&mut rng);
            format!("{h}@{u}").into_bytes()
        })
        .collect()
}

/// `n` keys of uniformly random bytes with lengths in `0..=max_len`.
pub fn random_binary_keys(n: usize, max_len: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            (0..len).map(|_| rng.gen()).collect()
        })
        .collect()
}

/// Splits `corpus` into keys containing any of `needles` and the rest.
pub fn split_by_substring<K: AsRef<[u8]> + Clone>(corpus: &[K], needles: &[&[u8]]) -> (Vec<K>, Vec<K>) {
    corpus.iter().cloned().partition(|k| {
        let k = k.as_ref();
        needles
            .iter()
            .any(|n| n.is_empty() || k.windows(n.len()).any(|w| w == *n))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emails_look_right() {
        let keys = generate_emails(2000, 1);
        assert_eq!(keys, generate_emails(2000, 1));
        assert_ne!(keys, generate_emails(2000, 2));
        let avg = keys.iter().map(|k| k.len()).sum::<usize>() as f64 / keys.len() as f64;
        assert!((16.0..28.0).contains(&avg), "average length {avg}");
        assert!(keys.iter().all(|k| k.contains(&b'@')));
        let gmail = keys.iter().filter(|k| k.starts_with(b"com.gmail@")).count();
        assert!(gmail > 300 && gmail < 700, "{gmail}");
    }

    #[test]
    fn split_partitions() {
        let keys = generate_emails(1000, 3);
        let (a, b) = split_by_substring(&keys, &[b"gmail", b"yahoo"]);
        assert_eq!(a.len() + b.len(), keys.len());
        assert!(a
            .iter()
            .all(|k| k.starts_with(b"com.gmail") || k.starts_with(b"com.yahoo")));
        assert!(b.iter().all(|k| !k.starts_with(b"com.gmail")));
    }

    #[test]
    fn binary_keys() {
        let keys = random_binary_keys(500, 12, 9);
        assert!(keys.iter().all(|k| k.len() <= 12));
        assert!(keys.iter().any(|k| k.is_empty()));
        assert!(keys.iter().flatten().any(|&b| b >= 0x80));
    }
}
