use std::collections::HashMap;
use std::path::Path;

use super::syllable::is_vowel;
use crate::{Error, Result};

/// Vowel lengths that spelling alone cannot reveal.
///
/// Keys are normalized word forms (lowercase, `v`→`u`, `j`→`i`); each entry
/// flags which vowel letters of the key are long by nature.
///
/// The text format has one entry per line, `word<TAB>macronized`, where a
/// long vowel is followed by `:` (`catilina\tcatili:na`). Precomposed macron
/// letters (`ī`) are accepted as well. Blank lines and lines starting with `#`
/// are skipped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MacronLexicon {
    entries: HashMap<String, Vec<bool>>,
}

pub(crate) fn normalize_letter(c: char) -> char {
    match c {
        'v' => 'u',
        'j' => 'i',
        other => other,
    }
}

fn normalize_key(word: &str) -> String {
    word.chars()
        .flat_map(char::to_lowercase)
        .map(normalize_letter)
        .collect()
}

fn demacron(c: char) -> Option<char> {
    Some(match c {
        'ā' | 'Ā' => 'a',
        'ē' | 'Ē' => 'e',
        'ī' | 'Ī' => 'i',
        'ō' | 'Ō' => 'o',
        'ū' | 'Ū' => 'u',
        'ȳ' | 'Ȳ' => 'y',
        _ => return None,
    })
}

/// Parses a macronized form into its plain letters and per-vowel long flags.
fn parse_macronized(form: &str) -> std::result::Result<(String, Vec<bool>), String> {
    let mut plain = String::new();
    let mut flags = Vec::new();
    for c in form.chars() {
        if c == ':' {
            match flags.last_mut() {
                Some(flag) if plain.ends_with(is_vowel) => *flag = true,
                _ => return Err(format!("`:` must follow a vowel in `{form}`")),
            }
            continue;
        }
        let (letter, long) = match demacron(c) {
            Some(base) => (base, true),
            None => (c, false),
        };
        let letter = letter.to_lowercase().next().unwrap_or(letter);
        let letter = normalize_letter(letter);
        plain.push(letter);
        if is_vowel(letter) {
            flags.push(long);
        }
    }
    Ok((plain, flags))
}

impl MacronLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds or replaces an entry. `macronized` must spell the same word.
    pub fn insert(&mut self, word: &str, macronized: &str) -> Result<()> {
        self.insert_at(word, macronized, 0)
    }

    fn insert_at(&mut self, word: &str, macronized: &str, line: usize) -> Result<()> {
        let key = normalize_key(word.trim());
        if key.is_empty() {
            return Err(Error::Lexicon {
                line,
                reason: "empty word".into(),
            });
        }
        let (plain, flags) =
            parse_macronized(macronized.trim()).map_err(|reason| Error::Lexicon { line, reason })?;
        if plain != key {
            return Err(Error::Lexicon {
                line,
                reason: format!("`{macronized}` does not spell `{key}`"),
            });
        }
        self.entries.insert(key, flags);
        Ok(())
    }

    /// Adds an entry straight from its macronized spelling.
    pub fn insert_macronized(&mut self, macronized: &str) -> Result<()> {
        let (plain, _) = parse_macronized(macronized.trim())
            .map_err(|reason| Error::Lexicon { line: 0, reason })?;
        self.insert(&plain, macronized)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lexicon = Self::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((word, form)) = line.split_once('\t') else {
                return Err(Error::Lexicon {
                    line: i + 1,
                    reason: "expected `word<TAB>macronized-form`".into(),
                });
            };
            lexicon.insert_at(word, form, i + 1)?;
        }
        Ok(lexicon)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Long-vowel flags for `word`, if it is listed.
    pub fn lookup(&self, word: &str) -> Option<&[bool]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    /// Whether the vowel letter at `ordinal` in `word` is long by nature.
    pub fn is_long(&self, word: &str, ordinal: usize) -> bool {
        self.lookup(word)
            .and_then(|flags| flags.get(ordinal))
            .copied()
            .unwrap_or(false)
    }

    /// Writes the lexicon back in the tab-separated format, sorted by key.
    pub fn to_text(&self) -> String {
        let mut keys: Vec<&String> = self.entries.keys().collect();
        keys.sort();
        let mut out = String::new();
        for key in keys {
            let flags = &self.entries[key];
            let mut ordinal = 0;
            let mut form = String::new();
            for c in key.chars() {
                form.push(c);
                if is_vowel(c) {
                    if flags[ordinal] {
                        form.push(':');
                    }
                    ordinal += 1;
                }
            }
            out.push_str(key);
            out.push('\t');
            out.push_str(&form);
            out.push('\n');
        }
        out
    }
}

impl<'a> FromIterator<&'a str> for MacronLexicon {
    /// Builds a lexicon from macronized forms; entries that fail to parse are
    /// skipped.
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        let mut lexicon = Self::new();
        for form in iter {
            let _ = lexicon.insert_macronized(form);
        }
        lexicon
    }
}
