use std::collections::HashMap;
use std::io::{self, Write};

use rayon::prelude::*;

use super::{char_ngrams, NGramSpec, SparseMatrix};
use crate::distortion::EncodedView;
use crate::{Error, Result};

/// Number of columns kept when retaining a fraction `ratio` of `p` features:
/// `⌈ratio·p⌉`, ignoring floating-point noise around whole numbers.
pub fn retained_count(ratio: f64, p: usize) -> usize {
    let x = ratio * p as f64;
    let k = if (x - x.round()).abs() < 1e-9 {
        x.round()
    } else {
        x.ceil()
    };
    (k as usize).min(p)
}

/// Chi-squared score of every column of a nonnegative matrix against class
/// labels `0..n_classes`.
///
/// For feature `j`, the observed mass of class `c` is the column sum over
/// rows of that class and the expected mass is the column total times the
/// class prior; the score sums `(observed − expected)² / expected` over
/// classes. Columns with zero mass score zero.
pub fn chi2_scores(x: &SparseMatrix, labels: &[usize], n_classes: usize) -> Vec<f64> {
    assert_eq!(x.n_rows(), labels.len(), "one label per row");
    let p = x.n_cols();
    let mut observed = vec![vec![0.0; p]; n_classes];
    let mut class_size = vec![0usize; n_classes];
    for (i, &y) in labels.iter().enumerate() {
        class_size[y] += 1;
        for (j, v) in x.row_iter(i) {
            observed[y][j] += v;
        }
    }
    let n = labels.len() as f64;
    (0..p)
        .map(|j| {
            let total: f64 = observed.iter().map(|o| o[j]).sum();
            if total <= 0.0 {
                return 0.0;
            }
            (0..n_classes)
                .filter(|&c| class_size[c] > 0)
                .map(|c| {
                    let expected = total * class_size[c] as f64 / n;
                    let d = observed[c][j] - expected;
                    d * d / expected
                })
                .sum()
        })
        .collect()
}

/// Vocabulary, IDF weights and column selection fitted on training views.
///
/// Weights are `tf · idf` with `idf = ln((1 + N) / (1 + df)) + 1`, then each
/// row is scaled to unit L2 norm over the full vocabulary. Selection (when
/// enabled) keeps the `⌈r·p⌉` columns with the highest chi-squared score.
#[derive(Clone, Debug)]
pub struct FeatureSpace {
    spec: NGramSpec,
    terms: Vec<String>,
    vocabulary: HashMap<String, usize>,
    idf: Vec<f64>,
    scores: Option<Vec<f64>>,
    ranking: Vec<usize>,
    selection: Vec<usize>,
    ratio: f64,
}

impl FeatureSpace {
    /// Fits vocabulary and IDF; every column is retained.
    pub fn fit(views: &[EncodedView], spec: NGramSpec) -> Result<Self> {
        let counts: Vec<HashMap<String, usize>> =
            views.par_iter().map(|v| char_ngrams(v, spec)).collect();

        let mut collection: HashMap<&str, (usize, usize)> = HashMap::new();
        for doc in &counts {
            for (term, &c) in doc {
                let e = collection.entry(term.as_str()).or_insert((0, 0));
                e.0 += c;
                e.1 += 1;
            }
        }
        let mut terms: Vec<(&str, usize)> = collection
            .into_iter()
            .filter(|(_, (cf, _))| *cf >= spec.min_count)
            .map(|(t, (_, df))| (t, df))
            .collect();
        if terms.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        terms.sort_unstable_by(|a, b| a.0.cmp(b.0));

        let n = views.len() as f64;
        let idf = terms
            .iter()
            .map(|(_, df)| ((1.0 + n) / (1.0 + *df as f64)).ln() + 1.0)
            .collect();
        let terms: Vec<String> = terms.into_iter().map(|(t, _)| t.to_string()).collect();
        let vocabulary = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let p = terms.len();
        Ok(FeatureSpace {
            spec,
            terms,
            vocabulary,
            idf,
            scores: None,
            ranking: (0..p).collect(),
            selection: (0..p).collect(),
            ratio: 1.0,
        })
    }

    /// Fits and scores every column by chi-squared against `labels` (class
    /// indices), keeping a fraction `ratio` of them.
    pub fn fit_with_selection(
        views: &[EncodedView],
        spec: NGramSpec,
        labels: &[usize],
        ratio: f64,
    ) -> Result<Self> {
        if labels.len() != views.len() {
            return Err(Error::Shape(format!(
                "{} labels for {} views",
                labels.len(),
                views.len()
            )));
        }
        let mut space = Self::fit(views, spec)?;
        let weighted = space.weigh(views);
        let n_classes = labels.iter().max().map_or(0, |m| m + 1);
        let scores = chi2_scores(&weighted, labels, n_classes);
        let mut ranking: Vec<usize> = (0..scores.len()).collect();
        ranking.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        space.scores = Some(scores);
        space.ranking = ranking;
        space.with_ratio(ratio)
    }

    /// Same space with a different selection fraction. Without chi-squared
    /// scores only `ratio = 1` is accepted.
    pub fn with_ratio(mut self, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(Error::Config(format!("selection ratio {ratio} is not in (0, 1]")));
        }
        if self.scores.is_none() && ratio < 1.0 {
            return Err(Error::Config("feature space was fitted without scores".into()));
        }
        let k = retained_count(ratio, self.terms.len());
        let mut selection = self.ranking[..k].to_vec();
        selection.sort_unstable();
        self.selection = selection;
        self.ratio = ratio;
        Ok(self)
    }

    pub fn spec(&self) -> NGramSpec {
        self.spec
    }

    /// Pre-selection feature count.
    pub fn vocabulary_size(&self) -> usize {
        self.terms.len()
    }

    /// Number of output columns.
    pub fn width(&self) -> usize {
        self.selection.len()
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn column_of(&self, term: &str) -> Option<usize> {
        self.vocabulary.get(term).copied()
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn scores(&self) -> Option<&[f64]> {
        self.scores.as_deref()
    }

    /// Retained vocabulary columns, increasing.
    pub fn selection(&self) -> &[usize] {
        &self.selection
    }

    /// TFIDF rows over the full vocabulary, before selection.
    pub fn weigh(&self, views: &[EncodedView]) -> SparseMatrix {
        let rows: Vec<Vec<(usize, f64)>> = views
            .par_iter()
            .map(|view| {
                let mut row: Vec<(usize, f64)> = char_ngrams(view, self.spec)
                    .into_iter()
                    .filter_map(|(t, c)| {
                        self.vocabulary
                            .get(&t)
                            .map(|&j| (j, c as f64 * self.idf[j]))
                    })
                    .collect();
                row.sort_unstable_by_key(|e| e.0);
                let norm = row.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
                if norm > 0.0 {
                    row.iter_mut().for_each(|e| e.1 /= norm);
                }
                row
            })
            .collect();
        let mut m = SparseMatrix::new(self.terms.len());
        for row in rows {
            m.push_row(row);
        }
        m
    }

    /// Weighted, selected block for `views`. Unknown n-grams are ignored.
    pub fn transform(&self, views: &[EncodedView]) -> SparseMatrix {
        let full = self.weigh(views);
        if self.selection.len() == self.terms.len() {
            full
        } else {
            full.select_columns(&self.selection)
        }
    }

    /// Retained terms, one `column<TAB>term<TAB>idf` line each.
    pub fn write_vocabulary<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (col, &j) in self.selection.iter().enumerate() {
            writeln!(w, "{col}\t{}\t{}", self.terms[j], self.idf[j])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distortion::Method;

    fn view(s: &str) -> EncodedView {
        EncodedView {
            method: Method::Sq,
            text: s.to_string(),
            segments: vec![s.to_string()],
        }
    }

    const ONE: NGramSpec = NGramSpec {
        n_min: 1,
        n_max: 1,
        min_count: 1,
    };

    #[test]
    fn single_fragment_has_uniform_idf() {
        let space = FeatureSpace::fit(&[view("abcab")], ONE).unwrap();
        assert!(space.idf().iter().all(|&w| (w - 1.0).abs() < 1e-12));
        let m = space.transform(&[view("abcab")]);
        assert!((m.row_norm(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn idf_formula() {
        let views = [view("ab"), view("a"), view("a")];
        let space = FeatureSpace::fit(&views, ONE).unwrap();
        let a = space.column_of("a").unwrap();
        let b = space.column_of("b").unwrap();
        assert!((space.idf()[a] - 1.0).abs() < 1e-12);
        assert!((space.idf()[b] - ((4.0f64 / 2.0).ln() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn min_count_is_collection_frequency() {
        let spec = NGramSpec { n_min: 1, n_max: 1, min_count: 3 };
        let space = FeatureSpace::fit(&[view("aaa"), view("bb")], spec).unwrap();
        assert_eq!(space.terms(), ["a"]);
        let spec = NGramSpec { n_min: 1, n_max: 1, min_count: 4 };
        assert!(matches!(
            FeatureSpace::fit(&[view("aaa")], spec),
            Err(Error::EmptyVocabulary)
        ));
    }

    #[test]
    fn unseen_ngrams_give_zero_rows() {
        let space = FeatureSpace::fit(&[view("ab")], ONE).unwrap();
        let m = space.transform(&[view("zz")]);
        assert_eq!(m.row_norm(0), 0.0);
        assert_eq!(m.n_cols(), 2);
    }

    #[test]
    fn class_exclusive_feature_ranks_first() {
        let views = [view("ab"), view("ab"), view("b"), view("b")];
        let labels = [0, 0, 1, 1];
        let space = FeatureSpace::fit_with_selection(&views, ONE, &labels, 0.5).unwrap();
        assert_eq!(space.selection(), &[space.column_of("a").unwrap()]);
        let all = space.clone().with_ratio(1.0).unwrap();
        assert_eq!(all.selection(), &[0, 1]);
    }

    #[test]
    fn ratio_bounds() {
        let space = FeatureSpace::fit(&[view("ab")], ONE).unwrap();
        assert!(space.clone().with_ratio(0.5).is_err());
        assert!(space.clone().with_ratio(0.0).is_err());
        assert!(space.with_ratio(1.5).is_err());
        assert_eq!(retained_count(0.1, 30), 3);
        assert_eq!(retained_count(0.3, 10), 3);
        assert_eq!(retained_count(0.25, 10), 3);
        assert_eq!(retained_count(1.0, 7), 7);
    }
}
