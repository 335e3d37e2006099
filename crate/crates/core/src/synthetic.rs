//! Seeded generator for a small Latin-like corpus whose authors share one
//! vocabulary, one function-word profile and one length profile, and differ
//! only in how often they pick the long-short-long form of a word.
//!
//! Every content word is built from a three-syllable stem `c v c v c v` plus
//! a closing consonant `k` and a final `s`. Form A places `k` after the first
//! vowel (`c v k . c v . c v s`, scanning long-short-long); form B places it
//! after the second (`c v . c v k . c v s`, short-long-long). Both forms have
//! eight letters, so base features cannot tell them apart.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Document;
use crate::{Error, Result};

const ONSETS: [char; 12] = ['b', 'c', 'd', 'f', 'g', 'l', 'm', 'n', 'p', 'r', 's', 't'];
const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];
const CLOSERS: [char; 4] = ['r', 'n', 's', 'l'];
const FUNCTION_WORDS: [&str; 10] = ["et", "in", "ad", "sed", "non", "cum", "ut", "per", "de", "ex"];

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticAuthor {
    pub name: String,
    /// Probability of choosing form A for a content word.
    pub form_a: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub authors: Vec<SyntheticAuthor>,
    pub documents_per_author: usize,
    pub sentences_per_document: usize,
    pub stems: usize,
    pub function_word_rate: f64,
    pub min_sentence_len: usize,
    pub max_sentence_len: usize,
}

impl SyntheticConfig {
    /// Three authors, 64 fragments each.
    pub fn standard(seed: u64) -> Self {
        SyntheticConfig {
            seed,
            authors: [("Aemilius", 0.85), ("Balbus", 0.5), ("Cornelius", 0.15)]
                .into_iter()
                .map(|(name, form_a)| SyntheticAuthor {
                    name: name.to_string(),
                    form_a,
                })
                .collect(),
            documents_per_author: 4,
            sentences_per_document: 160,
            stems: 240,
            function_word_rate: 0.3,
            min_sentence_len: 6,
            max_sentence_len: 14,
        }
    }

    /// Same profiles, 20 fragments per author.
    pub fn small(seed: u64) -> Self {
        SyntheticConfig {
            documents_per_author: 2,
            sentences_per_document: 100,
            ..Self::standard(seed)
        }
    }
}

struct Stem([char; 6]);

impl Stem {
    fn form(&self, closer: char, a: bool) -> String {
        let [c1, v1, c2, v2, c3, v3] = self.0;
        if a {
            [c1, v1, closer, c2, v2, c3, v3, 's'].iter().collect()
        } else {
            [c1, v1, c2, v2, closer, c3, v3, 's'].iter().collect()
        }
    }
}

fn capitalize(word: &str) -> String {
    let mut c = word.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Generates the documents described by `config`, deterministically.
pub fn generate(config: &SyntheticConfig) -> Vec<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let stems: Vec<(Stem, char)> = (0..config.stems)
        .map(|_| {
            let mut s = [' '; 6];
            for (i, slot) in s.iter_mut().enumerate() {
                *slot = if i % 2 == 0 {
                    *ONSETS.choose(&mut rng).expect("non-empty")
                } else {
                    *VOWELS.choose(&mut rng).expect("non-empty")
                };
            }
            (Stem(s), *CLOSERS.choose(&mut rng).expect("non-empty"))
        })
        .collect();

    let mut documents = Vec::new();
    for author in &config.authors {
        for d in 0..config.documents_per_author {
            let mut text = String::new();
            for _ in 0..config.sentences_per_document {
                let len = rng.gen_range(config.min_sentence_len..=config.max_sentence_len);
                let mut words = Vec::with_capacity(len);
                for _ in 0..len {
                    if rng.gen_bool(config.function_word_rate) {
                        words.push(FUNCTION_WORDS.choose(&mut rng).expect("non-empty").to_string());
                    } else {
                        let (stem, closer) = stems.choose(&mut rng).expect("non-empty");
                        words.push(stem.form(*closer, rng.gen_bool(author.form_a)));
                    }
                    if rng.gen_bool(0.05) {
                        words.last_mut().expect("just pushed").push(',');
                    }
                }
                let first = capitalize(&words[0]);
                words[0] = first;
                let last = words.last_mut().expect("at least one word");
                if last.ends_with(',') {
                    last.pop();
                }
                text.push_str(&words.join(" "));
                text.push_str(if rng.gen_bool(0.1) { "? " } else { ". " });
            }
            documents.push(Document {
                author: author.name.clone(),
                title: format!("liber{}", d + 1),
                text: text.trim_end().to_string(),
            });
        }
    }
    documents
}

/// Writes each document to `dir/Author_Title.txt`.
pub fn write_corpus(documents: &[Document], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for doc in documents {
        let path = dir.join(format!("{}.txt", doc.id()));
        std::fs::write(&path, &doc.text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
