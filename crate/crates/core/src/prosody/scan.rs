use super::syllable::{Syllable, Word, WordContext};
use super::{MacronLexicon, Quantity, QuantityString};
use crate::{Error, Result};

/// Quantity of each syllable of one word.
///
/// A syllable is long when its nucleus is a diphthong or a vowel the lexicon
/// marks long, or when the nucleus is followed by consonants weighing two or
/// more (`x` and `z` weigh two, `h` nothing). Position counts across the word
/// boundary through `context`. Everything else, including a vowel before a
/// vowel, is short.
pub fn assign_quantities(
    syllables: &[Syllable],
    lexicon: &MacronLexicon,
    context: WordContext,
) -> Vec<Quantity> {
    let word: String = syllables.iter().map(|s| s.text.as_str()).collect();
    let last = syllables.len().saturating_sub(1);
    syllables
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let mut weight = s.following_weight;
            if k == last {
                weight += context.onset_weight();
            }
            if s.diphthong || lexicon.is_long(&word, s.vowel_ordinal) || weight >= 2 {
                Quantity::Long
            } else {
                Quantity::Short
            }
        })
        .collect()
}

/// Syllabifies and annotates the words of a normalized sentence.
///
/// The period and tokens without a vowel are dropped.
pub fn scan_words(sentence: &str, lexicon: &MacronLexicon) -> Vec<Word> {
    let mut words: Vec<Word> = sentence
        .split_whitespace()
        .filter(|t| *t != ".")
        .filter_map(|t| Word::parse(t).ok())
        .collect();
    for i in 0..words.len() {
        let context = words
            .get(i + 1)
            .map_or(WordContext::END, WordContext::before);
        let quantities = assign_quantities(&words[i].syllables, lexicon, context);
        for (s, q) in words[i].syllables.iter_mut().zip(quantities) {
            s.quantity = q;
        }
    }
    words
}

/// Flattens a sentence into syllables, dropping every word-final syllable
/// that ends in a vowel or vowel + `m` when the next word opens with a vowel
/// or `h`.
pub fn apply_elision(words: &[Word]) -> Vec<Syllable> {
    let mut out = Vec::new();
    for (i, word) in words.iter().enumerate() {
        let elides = words.get(i + 1).is_some_and(|next| next.onset.opens_elision)
            && word.syllables.last().is_some_and(|s| s.elidable);
        let keep = if elides {
            word.syllables.len() - 1
        } else {
            word.syllables.len()
        };
        out.extend_from_slice(&word.syllables[..keep]);
    }
    out
}

/// Scans one normalized sentence. The last surviving syllable is anceps.
///
/// Returns an empty segment when nothing in the sentence can be scanned.
pub fn scan_sentence(sentence: &str, lexicon: &MacronLexicon) -> Vec<Quantity> {
    let words = scan_words(sentence, lexicon);
    let mut quantities: Vec<Quantity> = apply_elision(&words)
        .into_iter()
        .map(|s| s.quantity)
        .collect();
    if let Some(last) = quantities.last_mut() {
        *last = Quantity::Anceps;
    }
    quantities
}

/// Scans every sentence of a fragment; unscannable sentences are skipped.
pub fn scan_fragment<S: AsRef<str>>(
    sentences: &[S],
    lexicon: &MacronLexicon,
) -> Result<QuantityString> {
    let mut out = QuantityString::new();
    for sentence in sentences {
        out.push_segment(&scan_sentence(sentence.as_ref(), lexicon));
    }
    if out.is_empty() {
        return Err(Error::EmptyEncoding);
    }
    Ok(out)
}
