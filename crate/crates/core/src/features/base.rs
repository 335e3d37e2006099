use serde::Serialize;

use super::SparseMatrix;
use crate::distortion::FunctionWordList;

pub const MAX_WORD_LEN: usize = 25;
pub const MAX_SENTENCE_LEN: usize = 100;
/// 80 function words + 25 word lengths + 100 sentence lengths.
pub const BASE_DIM: usize = 80 + MAX_WORD_LEN + MAX_SENTENCE_LEN;

/// Topic-agnostic base features of one fragment; each block has unit L2 norm
/// or is all zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaseFeatureVector {
    pub function_words: Vec<f64>,
    pub word_lengths: Vec<f64>,
    pub sentence_lengths: Vec<f64>,
}

impl BaseFeatureVector {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(BASE_DIM);
        v.extend_from_slice(&self.function_words);
        v.extend_from_slice(&self.word_lengths);
        v.extend_from_slice(&self.sentence_lengths);
        v
    }
}

fn normalize(block: &mut [f64]) {
    let norm = block.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        block.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Relative frequencies of function words, word lengths (1..=25, longer
/// words clamp to 25) and sentence lengths in words (1..=100, clamped),
/// each block scaled to unit norm.
pub fn base_features<S: AsRef<str>>(
    sentences: &[S],
    function_words: &FunctionWordList,
) -> BaseFeatureVector {
    let mut fw = vec![0.0; function_words.len()];
    let mut wl = vec![0.0; MAX_WORD_LEN];
    let mut sl = vec![0.0; MAX_SENTENCE_LEN];
    let mut n_words = 0usize;
    let mut n_sentences = 0usize;

    for sentence in sentences {
        let mut len = 0usize;
        for token in sentence.as_ref().split_whitespace().filter(|t| *t != ".") {
            len += 1;
            if let Some(i) = function_words.position(token) {
                fw[i] += 1.0;
            }
            let chars = token.chars().count().clamp(1, MAX_WORD_LEN);
            wl[chars - 1] += 1.0;
        }
        if len > 0 {
            sl[len.min(MAX_SENTENCE_LEN) - 1] += 1.0;
            n_sentences += 1;
        }
        n_words += len;
    }

    if n_words > 0 {
        let n = n_words as f64;
        fw.iter_mut().chain(wl.iter_mut()).for_each(|v| *v /= n);
    }
    if n_sentences > 0 {
        let n = n_sentences as f64;
        sl.iter_mut().for_each(|v| *v /= n);
    }
    normalize(&mut fw);
    normalize(&mut wl);
    normalize(&mut sl);
    BaseFeatureVector {
        function_words: fw,
        word_lengths: wl,
        sentence_lengths: sl,
    }
}

/// One row of base features per fragment (given as its sentences).
pub fn base_feature_matrix<F, S>(fragments: &[F], function_words: &FunctionWordList) -> SparseMatrix
where
    F: AsRef<[S]>,
    S: AsRef<str>,
{
    let mut m = SparseMatrix::new(function_words.len() + MAX_WORD_LEN + MAX_SENTENCE_LEN);
    for f in fragments {
        m.push_row(base_features(f.as_ref(), function_words).to_vec().into_iter().enumerate());
    }
    m
}
