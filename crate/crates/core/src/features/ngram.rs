use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::distortion::EncodedView;

/// Range of n-gram orders and the minimum training count for a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NGramSpec {
    pub n_min: usize,
    pub n_max: usize,
    pub min_count: usize,
}

impl NGramSpec {
    /// SQ-grams: every n from 3 to 7.
    pub const SQ: NGramSpec = NGramSpec {
        n_min: 3,
        n_max: 7,
        min_count: 1,
    };
    /// Distorted views: 3-grams seen at least 5 times in training.
    pub const DV: NGramSpec = NGramSpec {
        n_min: 3,
        n_max: 3,
        min_count: 5,
    };
}

/// Counts the character n-grams of every segment of `view`. Windows never
/// cross a segment boundary.
pub fn char_ngrams(view: &EncodedView, spec: NGramSpec) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    for segment in &view.segments {
        let chars: Vec<char> = segment.chars().collect();
        for n in spec.n_min..=spec.n_max {
            if n == 0 || n > chars.len() {
                continue;
            }
            for w in chars.windows(n) {
                *counts.entry(w.iter().collect::<String>()).or_insert(0) += 1;
            }
        }
    }
    counts
}
