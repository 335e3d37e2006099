use serde::{Deserialize, Serialize};

use super::syllable::{Syllable, Word};
use super::Quantity;

/// Index of the stressed syllable of a word.
///
/// Words of one or two syllables are stressed on the first; longer words on
/// the penult when it is long, otherwise on the antepenult.
pub fn accent_position(syllables: &[Syllable]) -> usize {
    let n = syllables.len();
    if n <= 2 {
        return 0;
    }
    if syllables[n - 2].quantity == Quantity::Long {
        n - 2
    } else {
        n - 3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CursusKind {
    Planus,
    Tardus,
    Velox,
    None,
}

impl CursusKind {
    pub fn name(self) -> &'static str {
        match self {
            CursusKind::Planus => "planus",
            CursusKind::Tardus => "tardus",
            CursusKind::Velox => "velox",
            CursusKind::None => "none",
        }
    }
}

pub const STRESSED: char = '−';
pub const UNSTRESSED: char = '+';

// Longest first so that the longest match wins.
const PATTERNS: [(CursusKind, &str); 3] = [
    (CursusKind::Velox, "−++++−+"),
    (CursusKind::Tardus, "−++−++"),
    (CursusKind::Planus, "−++−+"),
];

/// Accentual cadence of a sentence ending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CursusPattern {
    pub kind: CursusKind,
    /// Stress marks of the last (up to) seven syllables.
    pub stress: String,
}

/// Classifies the cadence of a sentence from its annotated words.
///
/// Elision is not applied; stress is a property of each whole word.
pub fn detect_cursus(words: &[Word]) -> CursusPattern {
    let marks: Vec<char> = words
        .iter()
        .flat_map(|w| {
            let accent = accent_position(&w.syllables);
            (0..w.syllables.len()).map(move |i| if i == accent { STRESSED } else { UNSTRESSED })
        })
        .collect();
    let tail: String = marks[marks.len().saturating_sub(7)..].iter().collect();
    if marks.len() < 5 {
        return CursusPattern {
            kind: CursusKind::None,
            stress: tail,
        };
    }
    let kind = PATTERNS
        .iter()
        .find(|(_, pattern)| {
            let len = pattern.chars().count();
            marks.len() >= len && marks[marks.len() - len..].iter().copied().eq(pattern.chars())
        })
        .map_or(CursusKind::None, |(kind, _)| *kind);
    CursusPattern { kind, stress: tail }
}
