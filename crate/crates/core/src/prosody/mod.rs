//! Rule-based Latin scansion.
//!
//! Words are split into syllables by the usual phonological rules, each
//! syllable receives a quantity (long by nature, long by position, or short),
//! word-final vowels elide before a vowel or `h`, and the last surviving
//! syllable of a sentence is marked anceps. Vowel length that cannot be read
//! off the spelling comes from a [`MacronLexicon`]; anything it does not cover
//! is treated as short.

mod cursus;
mod lexicon;
mod scan;
mod syllable;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use cursus::{accent_position, detect_cursus, CursusKind, CursusPattern};
pub use lexicon::MacronLexicon;
pub use scan::{apply_elision, assign_quantities, scan_fragment, scan_sentence, scan_words};
pub use syllable::{syllabify, Onset, Syllable, Word, WordContext};

/// Quantity of a single syllable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantity {
    Long,
    Short,
    /// Metrically indifferent; used for the final syllable of a sentence.
    Anceps,
    /// Not yet assigned. Never survives [`assign_quantities`].
    Unknown,
}

impl Quantity {
    pub const LONG_SYMBOL: char = '−';
    pub const SHORT_SYMBOL: char = '∪';
    pub const ANCEPS_SYMBOL: char = 'X';

    pub fn symbol(self) -> char {
        match self {
            Quantity::Long => Self::LONG_SYMBOL,
            Quantity::Short => Self::SHORT_SYMBOL,
            Quantity::Anceps => Self::ANCEPS_SYMBOL,
            Quantity::Unknown => '?',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            Self::LONG_SYMBOL | '-' => Some(Quantity::Long),
            Self::SHORT_SYMBOL => Some(Quantity::Short),
            Self::ANCEPS_SYMBOL => Some(Quantity::Anceps),
            _ => None,
        }
    }
}

/// Renders a run of quantities with the scanner symbols `−`, `∪`, `X`.
pub fn render(quantities: &[Quantity]) -> String {
    quantities.iter().map(|q| q.symbol()).collect()
}

/// Scansion of a fragment: per-sentence segments laid end to end.
///
/// `boundaries[i]` is the exclusive end of sentence `i` in `symbols`; every
/// segment ends with exactly one anceps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantityString {
    symbols: Vec<Quantity>,
    boundaries: Vec<usize>,
}

impl QuantityString {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends one sentence segment. Empty segments are ignored.
    pub fn push_segment(&mut self, segment: &[Quantity]) {
        if segment.is_empty() {
            return;
        }
        debug_assert_eq!(segment.last(), Some(&Quantity::Anceps));
        self.symbols.extend_from_slice(segment);
        self.boundaries.push(self.symbols.len());
    }

    pub fn symbols(&self) -> &[Quantity] {
        &self.symbols
    }

    pub fn sentence_boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn sentence_count(&self) -> usize {
        self.boundaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn segments(&self) -> impl Iterator<Item = &[Quantity]> + '_ {
        let starts = std::iter::once(0).chain(self.boundaries.iter().copied());
        starts
            .zip(self.boundaries.iter().copied())
            .map(move |(s, e)| &self.symbols[s..e])
    }

    /// One rendered string per sentence.
    pub fn rendered_segments(&self) -> Vec<String> {
        self.segments().map(render).collect()
    }
}

impl fmt::Display for QuantityString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.symbols {
            write!(f, "{}", q.symbol())?;
        }
        Ok(())
    }
}
