//! Topic-masking views of a text and the FAKE control encoding.
//!
//! Every distorted view keeps function words and periods verbatim and masks
//! the remaining words with `*`:
//!
//! | method | `patientia` |
//! |--------|-------------|
//! | DVMA   | `*********` |
//! | DVSA   | `*`         |
//! | DVEX   | `p*******a` |
//! | DVL2   | `*******ia` |

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::prosody::{Quantity, QuantityString};
use crate::Error;

/// The 80 Latin function words, normalized (`v`→`u`, `j`→`i`).
pub const LATIN_FUNCTION_WORDS: [&str; 80] = [
    "a", "ab", "ac", "ad", "adhuc", "ante", "apud", "atque", "aut", "autem", "circa", "contra",
    "cum", "de", "dum", "e", "enim", "ergo", "et", "etiam", "ex", "hec", "iam", "ibi", "ideo",
    "idest", "igitur", "in", "inde", "inter", "ita", "licet", "nam", "ne", "nec", "nisi", "non",
    "nunc", "nunquam", "ob", "olim", "per", "post", "postea", "pro", "propter", "quando", "quasi",
    "que", "quia", "quidem", "quomodo", "quoniam", "quoque", "quot", "satis", "scilicet", "sed",
    "semper", "seu", "si", "sic", "sicut", "sine", "siue", "statim", "sub", "super", "supra",
    "tam", "tamen", "tunc", "ubi", "uel", "uelut", "uero", "uidelicet", "unde", "usque", "ut",
];

/// Ordered set of function words with exact-token membership.
#[derive(Clone, Debug)]
pub struct FunctionWordList {
    words: Vec<&'static str>,
    index: HashMap<&'static str, usize>,
}

impl FunctionWordList {
    pub fn latin() -> Self {
        let words = LATIN_FUNCTION_WORDS.to_vec();
        let index = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        FunctionWordList { words, index }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn position(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn words(&self) -> &[&'static str] {
        &self.words
    }
}

impl Default for FunctionWordList {
    fn default() -> Self {
        Self::latin()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DvMethod {
    Dvma,
    Dvsa,
    Dvex,
    Dvl2,
}

impl DvMethod {
    /// Declaration order, also the column order of ALLDV.
    pub const ALL: [DvMethod; 4] = [DvMethod::Dvma, DvMethod::Dvsa, DvMethod::Dvex, DvMethod::Dvl2];

    fn mask(self, token: &str) -> String {
        let chars: Vec<char> = token.chars().collect();
        let n = chars.len();
        match self {
            DvMethod::Dvma => "*".repeat(n),
            DvMethod::Dvsa => "*".to_string(),
            DvMethod::Dvex if n <= 2 => token.to_string(),
            DvMethod::Dvex => {
                let mut s = String::with_capacity(n);
                s.push(chars[0]);
                s.extend(std::iter::repeat_n('*', n - 2));
                s.push(chars[n - 1]);
                s
            }
            DvMethod::Dvl2 if n <= 2 => token.to_string(),
            DvMethod::Dvl2 => {
                let mut s = "*".repeat(n - 2);
                s.extend(&chars[n - 2..]);
                s
            }
        }
    }
}

/// Every encoding a fragment can be rendered under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    Dv(DvMethod),
    Fake,
    Sq,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Dv(DvMethod::Dvma) => "DVMA",
            Method::Dv(DvMethod::Dvsa) => "DVSA",
            Method::Dv(DvMethod::Dvex) => "DVEX",
            Method::Dv(DvMethod::Dvl2) => "DVL2",
            Method::Fake => "FAKE",
            Method::Sq => "SQ",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "dvma" => Method::Dv(DvMethod::Dvma),
            "dvsa" => Method::Dv(DvMethod::Dvsa),
            "dvex" => Method::Dv(DvMethod::Dvex),
            "dvl2" => Method::Dv(DvMethod::Dvl2),
            "fake" => Method::Fake,
            "sq" => Method::Sq,
            other => return Err(Error::Config(format!("unknown encoding method `{other}`"))),
        })
    }
}

/// A fragment rendered under one encoding.
///
/// `text` is the human-readable form (tokens separated by single spaces).
/// `segments` are the units character n-grams are drawn from: the whole text
/// for distorted views, one symbol run per sentence for SQ and FAKE.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedView {
    pub method: Method,
    pub text: String,
    pub segments: Vec<String>,
}

impl EncodedView {
    pub fn from_scansion(scansion: &QuantityString) -> Self {
        let segments = scansion.rendered_segments();
        EncodedView {
            method: Method::Sq,
            text: segments.join(" "),
            segments,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.segments.iter().all(String::is_empty)
    }
}

/// Masks every non-function word of `text` according to `method`.
pub fn distort(text: &str, method: DvMethod, function_words: &FunctionWordList) -> EncodedView {
    let tokens: Vec<String> = text
        .split_whitespace()
        .map(|t| {
            if t == "." || function_words.contains(t) {
                t.to_string()
            } else {
                method.mask(t)
            }
        })
        .collect();
    let text = tokens.join(" ");
    let segments = if text.is_empty() { Vec::new() } else { vec![text.clone()] };
    EncodedView {
        method: Method::Dv(method),
        text,
        segments,
    }
}

/// The four distorted views of `text`, in [`DvMethod::ALL`] order.
pub fn all_views(text: &str, function_words: &FunctionWordList) -> [EncodedView; 4] {
    DvMethod::ALL.map(|m| distort(text, m, function_words))
}

/// Number of FAKE symbols for a word of `chars` characters: one per three
/// characters rounded half up, at least one.
pub fn fake_length(chars: usize) -> usize {
    // n/3 never has a fractional part of exactly one half, so (n + 1) / 3
    // is the rounded value.
    ((chars + 1) / 3).max(1)
}

const FAKE_ALPHABET: [Quantity; 3] = [Quantity::Short, Quantity::Long, Quantity::Anceps];

/// Memoized word → random quantity string map for the FAKE encoding.
///
/// The string for a word depends only on the seed and the word, so the
/// encoding is reproducible regardless of the order words are first seen.
#[derive(Debug)]
pub struct FakeDictionary {
    seed: u64,
    memo: RwLock<HashMap<String, String>>,
}

impl FakeDictionary {
    pub fn new(seed: u64) -> Self {
        FakeDictionary {
            seed,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.memo.read().expect("fake dictionary lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn draw(&self, word: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.seed.to_le_bytes());
        hasher.update(word.as_bytes());
        let digest: [u8; 32] = hasher.finalize().into();
        let mut rng = ChaCha8Rng::from_seed(digest);
        (0..fake_length(word.chars().count()))
            .map(|_| FAKE_ALPHABET[rng.gen_range(0..FAKE_ALPHABET.len())].symbol())
            .collect()
    }

    /// The replacement for `word`, inserting it on first use.
    pub fn get(&self, word: &str) -> String {
        if let Some(s) = self.memo.read().expect("fake dictionary lock poisoned").get(word) {
            return s.clone();
        }
        let drawn = self.draw(word);
        self.memo
            .write()
            .expect("fake dictionary lock poisoned")
            .entry(word.to_string())
            .or_insert(drawn)
            .clone()
    }
}

/// Replaces every word with its FAKE string and every period with `X`.
pub fn fake_encode(text: &str, dictionary: &FakeDictionary) -> EncodedView {
    let mut tokens = Vec::new();
    let mut segments = Vec::new();
    let mut current = String::new();
    for token in text.split_whitespace() {
        if token == "." {
            tokens.push(Quantity::ANCEPS_SYMBOL.to_string());
            current.push(Quantity::ANCEPS_SYMBOL);
            segments.push(std::mem::take(&mut current));
        } else {
            let fake = dictionary.get(token);
            current.push_str(&fake);
            tokens.push(fake);
        }
    }
    if !current.is_empty() {
        segments.push(current);
    }
    EncodedView {
        method: Method::Fake,
        text: tokens.join(" "),
        segments,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(text: &str, m: DvMethod) -> String {
        distort(text, m, &FunctionWordList::latin()).text
    }

    #[test]
    fn list_has_80_distinct_words() {
        let f = FunctionWordList::latin();
        assert_eq!(f.len(), 80);
        assert_eq!(f.index.len(), 80);
        assert!(!f.contains("quam"));
        assert!(f.contains("etiam"));
    }

    #[test]
    fn masking_examples() {
        assert_eq!(dv("arma uirumque cano .", DvMethod::Dvma), "**** ******** **** .");
        assert_eq!(dv("patientia nostra .", DvMethod::Dvex), "p*******a n****a .");
        assert_eq!(dv("quam diu etiam furor .", DvMethod::Dvl2), "**am *iu etiam ***or .");
        assert_eq!(dv("ad te .", DvMethod::Dvsa), "ad * .");
        assert_eq!(dv("te o .", DvMethod::Dvex), "te o .");
    }

    #[test]
    fn four_views() {
        let views = all_views("", &FunctionWordList::latin());
        assert_eq!(views.len(), 4);
        assert!(views.iter().all(EncodedView::is_empty));
        let a = all_views("arma cano .", &FunctionWordList::latin());
        let b: Vec<_> = DvMethod::ALL
            .iter()
            .rev()
            .map(|m| distort("arma cano .", *m, &FunctionWordList::latin()))
            .collect();
        assert_eq!(a[0], b[3]);
        assert_eq!(a[3], b[0]);
    }

    #[test]
    fn fake_lengths() {
        assert_eq!(fake_length(9), 3);
        assert_eq!(fake_length(1), 1);
        assert_eq!(fake_length(2), 1);
        assert_eq!(fake_length(4), 1);
        assert_eq!(fake_length(5), 2);
        let d = FakeDictionary::new(7);
        assert_eq!(d.get("patientia").chars().count(), 3);
    }

    #[test]
    fn fake_is_memoized_and_seeded() {
        let d = FakeDictionary::new(1);
        let v = fake_encode("arma cano arma .", &d);
        let toks: Vec<&str> = v.text.split(' ').collect();
        assert_eq!(toks[0], toks[2]);
        assert_eq!(toks[3], "X");
        assert_eq!(d.len(), 2);
        let again = fake_encode("arma cano arma .", &FakeDictionary::new(1));
        assert_eq!(v, again);
        assert_eq!(v.segments.len(), 1);
        assert!(v.segments[0].ends_with('X'));
    }

    #[test]
    fn method_names_parse() {
        for m in ["dvma", "DVSA", "dvex", "dvl2", "fake", "sq"] {
            let parsed: Method = m.parse().unwrap();
            assert_eq!(parsed.name().to_ascii_lowercase(), m.to_ascii_lowercase());
        }
        assert!("dv3".parse::<Method>().is_err());
    }
}
