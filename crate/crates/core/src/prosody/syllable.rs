use serde::Serialize;

use super::Quantity;
use crate::{Error, Result};

const DIPHTHONGS: [[char; 2]; 6] = [
    ['a', 'e'],
    ['a', 'u'],
    ['e', 'i'],
    ['e', 'u'],
    ['o', 'e'],
    ['u', 'i'],
];

pub(crate) fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Nucleus { diphthong: bool },
    /// `weight` is how many consonants the unit counts for when deciding
    /// length by position: `x`/`z` count double, `h` not at all.
    Consonant { weight: u8 },
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    start: usize,
    end: usize,
    kind: Kind,
}

/// `i` and `u` act as consonants word-initially before a vowel (`iam`,
/// `uir`) and between two vowels (`eius`, `cauere`).
fn is_consonantal(chars: &[char], at: usize, prev_is_nucleus: bool) -> bool {
    let c = chars[at];
    if c != 'i' && c != 'u' {
        return false;
    }
    let Some(&next) = chars.get(at + 1) else {
        return false;
    };
    if !is_vowel(next) {
        return false;
    }
    if at == 0 {
        return !(c == 'i' && next == 'i');
    }
    prev_is_nucleus
}

fn segment(chars: &[char]) -> Vec<Segment> {
    let mut segments: Vec<Segment> = Vec::with_capacity(chars.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        let after = chars.get(i + 2).copied();
        let prev_is_nucleus = matches!(
            segments.last(),
            Some(Segment {
                kind: Kind::Nucleus { .. },
                ..
            })
        );

        let digraph = (c == 'q' && next == Some('u'))
            || (c == 'g' && next == Some('u') && after.is_some_and(is_vowel))
            || (matches!(c, 'c' | 'p' | 't' | 'r') && next == Some('h'));
        let (len, kind) = if digraph {
            (2, Kind::Consonant { weight: 1 })
        } else if is_vowel(c) {
            if is_consonantal(chars, i, prev_is_nucleus) {
                (1, Kind::Consonant { weight: 1 })
            } else if next.is_some_and(|n| DIPHTHONGS.contains(&[c, n]))
                && !is_consonantal(chars, i + 1, true)
            {
                (2, Kind::Nucleus { diphthong: true })
            } else {
                (1, Kind::Nucleus { diphthong: false })
            }
        } else {
            let weight = match c {
                'x' | 'z' => 2,
                'h' => 0,
                _ => 1,
            };
            (1, Kind::Consonant { weight })
        };

        segments.push(Segment {
            start: i,
            end: i + len,
            kind,
        });
        i += len;
    }
    segments
}

/// One syllable of a word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Syllable {
    pub text: String,
    pub nucleus: String,
    pub quantity: Quantity,
    pub(crate) diphthong: bool,
    /// Position of the nucleus among the vowel letters of the word.
    pub(crate) vowel_ordinal: usize,
    /// Consonant weight between this nucleus and the next one in the word.
    pub(crate) following_weight: u8,
    /// Ends in a bare vowel or vowel + `m`, so it elides before a vowel.
    pub(crate) elidable: bool,
}

impl Syllable {
    pub fn is_diphthong(&self) -> bool {
        self.diphthong
    }
}

/// How a word begins, as seen by the word before it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Onset {
    /// Consonant weight before the first nucleus.
    pub weight: u8,
    /// Starts with a vowel or `h`, which triggers elision.
    pub opens_elision: bool,
}

/// What follows a word: the onset of the next word, if any.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WordContext {
    pub next: Option<Onset>,
}

impl WordContext {
    pub const END: WordContext = WordContext { next: None };

    pub fn before(next: &Word) -> Self {
        WordContext {
            next: Some(next.onset),
        }
    }

    pub(crate) fn onset_weight(&self) -> u8 {
        self.next.map_or(0, |o| o.weight)
    }
}

/// A syllabified word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Word {
    pub text: String,
    pub syllables: Vec<Syllable>,
    pub onset: Onset,
}

impl Word {
    pub fn parse(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let segments = segment(&chars);
        let syllables = build_syllables(text, &chars, &segments)?;
        let mut onset = Onset::default();
        for seg in &segments {
            match seg.kind {
                Kind::Consonant { weight } => {
                    if seg.start == 0 && chars[0] == 'h' {
                        onset.opens_elision = true;
                    }
                    onset.weight += weight;
                }
                Kind::Nucleus { .. } => {
                    if seg.start == 0 {
                        onset.opens_elision = true;
                    }
                    break;
                }
            }
        }
        Ok(Word {
            text: text.to_string(),
            syllables,
            onset,
        })
    }

    pub fn quantities(&self) -> Vec<Quantity> {
        self.syllables.iter().map(|s| s.quantity).collect()
    }
}

/// Splits a normalized word into syllables.
///
/// A single consonant between vowels opens the next syllable; in a longer
/// cluster the first consonant closes the previous syllable and the rest open
/// the next one. Leading and trailing consonants stay with the first and last
/// syllable. Quantities are left [`Quantity::Unknown`].
pub fn syllabify(word: &str) -> Result<Vec<Syllable>> {
    Word::parse(word).map(|w| w.syllables)
}

fn build_syllables(word: &str, chars: &[char], segments: &[Segment]) -> Result<Vec<Syllable>> {
    let nuclei: Vec<usize> = segments
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s.kind, Kind::Nucleus { .. }))
        .map(|(i, _)| i)
        .collect();
    if nuclei.is_empty() {
        return Err(Error::NoNucleus(word.to_string()));
    }

    // Segment index where each syllable starts.
    let mut starts = vec![0usize];
    for pair in nuclei.windows(2) {
        let between = pair[1] - pair[0] - 1;
        let start = if between <= 1 {
            pair[1] - between
        } else {
            pair[0] + 2
        };
        starts.push(start);
    }

    let vowel_ordinal = |pos: usize| chars[..pos].iter().filter(|&&c| is_vowel(c)).count();
    let text_of = |from: usize, to: usize| -> String {
        if from >= to {
            return String::new();
        }
        chars[segments[from].start..segments[to - 1].end]
            .iter()
            .collect()
    };

    let mut syllables = Vec::with_capacity(nuclei.len());
    for (k, &nucleus_idx) in nuclei.iter().enumerate() {
        let start = starts[k];
        let end = starts.get(k + 1).copied().unwrap_or(segments.len());
        let next_nucleus = nuclei.get(k + 1).copied().unwrap_or(segments.len());
        let following_weight = segments[nucleus_idx + 1..next_nucleus]
            .iter()
            .map(|s| match s.kind {
                Kind::Consonant { weight } => weight,
                Kind::Nucleus { .. } => 0,
            })
            .sum();
        let coda = text_of(nucleus_idx + 1, end);
        let seg = segments[nucleus_idx];
        syllables.push(Syllable {
            text: text_of(start, end),
            nucleus: text_of(nucleus_idx, nucleus_idx + 1),
            quantity: Quantity::Unknown,
            diphthong: matches!(seg.kind, Kind::Nucleus { diphthong: true }),
            vowel_ordinal: vowel_ordinal(seg.start),
            following_weight,
            elidable: coda.is_empty() || coda == "m",
        });
    }
    Ok(syllables)
}
