//! Documents, cleaning, sentences, fragments and stratified splits.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::{Error, Result};

/// Sentences per fragment.
pub const FRAGMENT_SIZE: usize = 10;
/// A sentence needs this many distinct words to stand on its own.
pub const MIN_DISTINCT_WORDS: usize = 5;

/// An author-labeled raw text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub author: String,
    pub title: String,
    pub text: String,
}

impl Document {
    /// Identifier used in diagnostics and split records.
    pub fn id(&self) -> String {
        if self.title.is_empty() {
            self.author.clone()
        } else {
            format!("{}_{}", self.author, self.title)
        }
    }
}

/// Loads every `Author_Title.txt` file of `dir`, sorted by file name.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Vec<Document>> {
    let dir = dir.as_ref();
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
            paths.push(path);
        }
    }
    paths.sort();

    let mut documents = Vec::with_capacity(paths.len());
    for path in paths {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let (author, title) = match stem.split_once('_') {
            Some((a, t)) => (a.to_string(), t.to_string()),
            None => (stem.clone(), String::new()),
        };
        if author.is_empty() {
            return Err(Error::Config(format!(
                "{}: file name has no author label",
                path.display()
            )));
        }
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        documents.push(Document {
            author,
            title,
            text,
        });
    }
    if documents.is_empty() {
        return Err(Error::Config(format!("{}: no .txt documents", dir.display())));
    }
    Ok(documents)
}

fn strip_tags(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut depth = 0usize;
    for c in raw.chars() {
        match c {
            '<' => depth += 1,
            '>' if depth > 0 => {
                depth -= 1;
                out.push(' ');
            }
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

/// Normalizes raw text: no markup, no digits or symbols, no commas; `?`, `!`,
/// `;`, `:` and suspension points become periods; lowercase; `v`→`u`,
/// `j`→`i`; accents dropped; single spaces with every period its own token.
///
/// The output alphabet is `a`–`z`, space and `.`.
pub fn clean_text(raw: &str) -> Result<String> {
    let stripped = strip_tags(raw);
    let mut flat = String::with_capacity(stripped.len());
    for c in stripped.nfd().filter(|c| !is_combining_mark(*c)) {
        match c {
            'æ' | 'Æ' => flat.push_str("ae"),
            'œ' | 'Œ' => flat.push_str("oe"),
            _ => flat.extend(c.to_lowercase()),
        }
    }

    let mut tokens: Vec<String> = Vec::new();
    let mut word = String::new();
    fn flush(word: &mut String, tokens: &mut Vec<String>) {
        if !word.is_empty() {
            tokens.push(std::mem::take(word));
        }
    }
    for c in flat.chars() {
        match c {
            'a'..='z' => word.push(match c {
                'v' => 'u',
                'j' => 'i',
                other => other,
            }),
            ',' | '0'..='9' => {}
            '.' | '?' | '!' | ';' | ':' | '…' => {
                flush(&mut word, &mut tokens);
                if tokens.last().is_some_and(|t| t != ".") {
                    tokens.push(".".to_string());
                }
            }
            _ => flush(&mut word, &mut tokens),
        }
    }
    flush(&mut word, &mut tokens);

    if tokens.iter().all(|t| t == ".") {
        return Err(Error::EmptyDocument);
    }
    Ok(tokens.join(" "))
}

/// Splits cleaned text into sentences ending in `" ."`.
///
/// A sentence with fewer than five distinct words is joined to the next one;
/// a short tail is joined to the previous sentence.
pub fn split_sentences(text: &str) -> Result<Vec<String>> {
    let mut sentences: Vec<Vec<&str>> = Vec::new();
    let mut buffer: Vec<&str> = Vec::new();
    fn flush<'a>(buffer: &mut Vec<&'a str>, sentences: &mut Vec<Vec<&'a str>>) {
        let distinct: HashSet<&str> = buffer.iter().copied().collect();
        if distinct.len() >= MIN_DISTINCT_WORDS {
            sentences.push(std::mem::take(buffer));
        }
    }
    for token in text.split_whitespace() {
        if token == "." {
            flush(&mut buffer, &mut sentences);
        } else {
            buffer.push(token);
        }
    }
    flush(&mut buffer, &mut sentences);
    if !buffer.is_empty() {
        match sentences.last_mut() {
            Some(last) => last.extend(buffer),
            None => sentences.push(buffer),
        }
    }
    if sentences.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Ok(sentences
        .into_iter()
        .map(|words| format!("{} .", words.join(" ")))
        .collect())
}

/// Cuts sentences into consecutive windows of `size`.
///
/// A trailing remainder of at least half a window is its own fragment,
/// otherwise it is appended to the previous one. Fewer than `size` sentences
/// give a single fragment.
pub fn fragment_windows<T: Clone>(sentences: &[T], size: usize) -> Vec<Vec<T>> {
    assert!(size > 0, "fragment size must be positive");
    let mut windows: Vec<Vec<T>> = sentences.chunks(size).map(<[T]>::to_vec).collect();
    if windows.len() > 1 {
        let tail_len = windows.last().map_or(0, Vec::len);
        if tail_len * 2 < size {
            let tail = windows.pop().unwrap_or_default();
            if let Some(last) = windows.last_mut() {
                last.extend(tail);
            }
        }
    }
    windows
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FragmentSource {
    pub document: String,
    pub ordinal: usize,
}

/// The classification unit: consecutive normalized sentences of one author.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    pub author: String,
    pub sentences: Vec<String>,
    pub source: FragmentSource,
}

impl Fragment {
    /// Sentences joined by single spaces.
    pub fn text(&self) -> String {
        self.sentences.join(" ")
    }
}

/// Cleans, splits and fragments one document.
pub fn fragment_document(document: &Document, size: usize) -> Result<Vec<Fragment>> {
    let wrap = |e: Error| Error::InDocument {
        document: document.id(),
        source: Box::new(e),
    };
    if document.author.trim().is_empty() {
        return Err(wrap(Error::Config("empty author label".into())));
    }
    let cleaned = clean_text(&document.text).map_err(wrap)?;
    let sentences = split_sentences(&cleaned).map_err(wrap)?;
    Ok(fragment_windows(&sentences, size)
        .into_iter()
        .enumerate()
        .map(|(ordinal, sentences)| Fragment {
            author: document.author.clone(),
            sentences,
            source: FragmentSource {
                document: document.id(),
                ordinal,
            },
        })
        .collect())
}

/// Fragments every document, preserving document order.
pub fn fragment_corpus(documents: &[Document], size: usize) -> Result<Vec<Fragment>> {
    let mut out = Vec::new();
    for document in documents {
        out.extend(fragment_document(document, size)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Validation,
    Test,
}

/// Disjoint train / validation / test fragment indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub seed: u64,
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub author: String,
    pub document: String,
    pub fragment: usize,
    pub partition: Partition,
}

impl SplitPlan {
    pub fn indices(&self, partition: Partition) -> &[usize] {
        match partition {
            Partition::Train => &self.train,
            Partition::Validation => &self.validation,
            Partition::Test => &self.test,
        }
    }

    pub fn len(&self) -> usize {
        self.train.len() + self.validation.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One record per fragment, in fragment order.
    pub fn records(&self, fragments: &[Fragment]) -> Vec<PlanRecord> {
        let mut partition = vec![Partition::Train; fragments.len()];
        for &i in &self.validation {
            partition[i] = Partition::Validation;
        }
        for &i in &self.test {
            partition[i] = Partition::Test;
        }
        fragments
            .iter()
            .zip(partition)
            .map(|(f, p)| PlanRecord {
                author: f.author.clone(),
                document: f.source.document.clone(),
                fragment: f.source.ordinal,
                partition: p,
            })
            .collect()
    }

    /// Hex SHA-256 of the plan, used to tie report rows to one split.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(self).expect("split plan serializes");
        Sha256::digest(&json)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Splits `counts[a]` items into per-group shares of one tenth whose total is
/// the rounded tenth of the sum, by the largest-remainder method. Ties go to
/// the earlier group.
fn tenth_quotas(counts: &[usize]) -> Vec<usize> {
    let total: usize = counts.iter().sum();
    let target = (total + 5) / 10;
    let mut quotas: Vec<usize> = counts.iter().map(|n| n / 10).collect();
    let assigned: usize = quotas.iter().sum();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(counts[i] % 10));
    for &i in order.iter().take(target.saturating_sub(assigned)) {
        quotas[i] += 1;
    }
    quotas
}

/// Stratified 90/10 train/test split, then 90/10 train/validation on the
/// training part, shuffled within each author by `seed`.
pub fn stratified_split(fragments: &[Fragment], seed: u64) -> Result<SplitPlan> {
    let mut by_author: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, f) in fragments.iter().enumerate() {
        by_author.entry(f.author.as_str()).or_default().push(i);
    }
    for (author, idx) in &by_author {
        if idx.len() < 3 {
            return Err(Error::Stratification {
                author: author.to_string(),
                count: idx.len(),
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups: Vec<Vec<usize>> = by_author.into_values().collect();
    for group in &mut groups {
        group.shuffle(&mut rng);
    }

    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let test_quota = tenth_quotas(&sizes);
    let remaining: Vec<usize> = sizes.iter().zip(&test_quota).map(|(n, t)| n - t).collect();
    let val_quota = tenth_quotas(&remaining);

    let mut plan = SplitPlan {
        seed,
        train: Vec::new(),
        validation: Vec::new(),
        test: Vec::new(),
    };
    for ((group, t), v) in groups.iter().zip(test_quota).zip(val_quota) {
        plan.test.extend_from_slice(&group[..t]);
        plan.validation.extend_from_slice(&group[t..t + v]);
        plan.train.extend_from_slice(&group[t + v..]);
    }
    plan.train.sort_unstable();
    plan.validation.sort_unstable();
    plan.test.sort_unstable();
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cleaning_examples() {
        assert_eq!(clean_text("Vjdit, et 12 abiit?").unwrap(), "uidit et abiit .");
        assert_eq!(clean_text("iam").unwrap(), "iam");
        assert_eq!(clean_text("Quò").unwrap(), "quo");
        assert_eq!(
            clean_text("<p class=\"x\">Arma; uirum: cano... troiae!</p>").unwrap(),
            "arma . uirum . cano . troiae ."
        );
        assert_eq!(clean_text("Cæsar (dixit) ālea").unwrap(), "caesar dixit alea");
        assert!(matches!(clean_text("12, 13 ?!"), Err(Error::EmptyDocument)));
        assert!(matches!(clean_text(""), Err(Error::EmptyDocument)));
    }

    #[test]
    fn sentence_merging() {
        assert_eq!(split_sentences("a b c d e . f g .").unwrap(), ["a b c d e f g ."]);
        assert_eq!(
            split_sentences("a a a a a . b c d e f .").unwrap(),
            ["a a a a a b c d e f ."]
        );
        assert_eq!(
            split_sentences("alpha beta gamma delta epsilon .").unwrap(),
            ["alpha beta gamma delta epsilon ."]
        );
        assert_eq!(split_sentences("a b .").unwrap(), ["a b ."]);
        assert!(split_sentences(". .").is_err());
    }

    #[test]
    fn windows_with_remainder() {
        let s: Vec<usize> = (0..25).collect();
        let sizes: Vec<usize> = fragment_windows(&s, 10).iter().map(Vec::len).collect();
        assert_eq!(sizes, [10, 10, 5]);
        let s: Vec<usize> = (0..12).collect();
        assert_eq!(fragment_windows(&s, 10).len(), 1);
        let s: Vec<usize> = (0..10).collect();
        assert_eq!(fragment_windows(&s, 10), vec![s.clone()]);
        let s: Vec<usize> = (0..3).collect();
        assert_eq!(fragment_windows(&s, 10), vec![s.clone()]);
    }

    fn frags(author: &str, n: usize) -> Vec<Fragment> {
        (0..n)
            .map(|i| Fragment {
                author: author.into(),
                sentences: vec![format!("s{i} .")],
                source: FragmentSource {
                    document: author.into(),
                    ordinal: i,
                },
            })
            .collect()
    }

    #[test]
    fn split_sizes() {
        let plan = stratified_split(&frags("a", 100), 3).unwrap();
        assert_eq!((plan.train.len(), plan.validation.len(), plan.test.len()), (81, 9, 10));

        let mut two = frags("a", 60);
        two.extend(frags("b", 40));
        let plan = stratified_split(&two, 3).unwrap();
        let test_a = plan.test.iter().filter(|&&i| two[i].author == "a").count();
        assert_eq!((test_a, plan.test.len() - test_a), (6, 4));
        assert_eq!(plan, stratified_split(&two, 3).unwrap());
        assert_ne!(plan, stratified_split(&two, 4).unwrap());
    }

    #[test]
    fn split_requires_three_per_author() {
        let mut f = frags("a", 10);
        f.extend(frags("b", 2));
        match stratified_split(&f, 0) {
            Err(Error::Stratification { author, count }) => {
                assert_eq!(author, "b");
                assert_eq!(count, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn largest_remainder_quotas() {
        assert_eq!(tenth_quotas(&[100]), [10]);
        assert_eq!(tenth_quotas(&[15, 15]), [2, 1]);
        assert_eq!(tenth_quotas(&[3, 3, 3]), [1, 0, 0]);
    }

    #[test]
    fn empty_document_names_itself() {
        let doc = Document {
            author: "Cicero".into(),
            title: "Empty".into(),
            text: "123".into(),
        };
        let err = fragment_document(&doc, 10).unwrap_err();
        assert!(err.to_string().contains("Cicero_Empty"));
    }
}
