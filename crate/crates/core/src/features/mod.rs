//! Feature extraction: base features, character n-grams, TFIDF and
//! chi-squared selection.

mod base;
mod ngram;
mod space;
mod sparse;

pub use base::{base_feature_matrix, base_features, BaseFeatureVector, BASE_DIM, MAX_SENTENCE_LEN, MAX_WORD_LEN};
pub use ngram::{char_ngrams, NGramSpec};
pub use space::{chi2_scores, retained_count, FeatureSpace};
pub use sparse::SparseMatrix;

use crate::Result;

/// Concatenates the base-feature block with encoding blocks, in order.
pub fn assemble(base: &SparseMatrix, blocks: &[&SparseMatrix]) -> Result<SparseMatrix> {
    let mut all = Vec::with_capacity(blocks.len() + 1);
    all.push(base);
    all.extend_from_slice(blocks);
    SparseMatrix::hstack(&all)
}
