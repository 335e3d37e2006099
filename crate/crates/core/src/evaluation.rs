//! F1 scores, percentage deltas and McNemar's paired test.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::{Error, Result};

/// Significance level for McNemar's test.
pub const ALPHA: f64 = 0.05;
/// Below this many discordant pairs the exact binomial test is used.
pub const EXACT_THRESHOLD: usize = 25;

/// One-vs-rest counts per class.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: Vec<usize>,
    pub fp: Vec<usize>,
    pub fn_: Vec<usize>,
}

impl ConfusionCounts {
    pub fn from_predictions<L: AsRef<str>>(
        y_true: &[L],
        y_pred: &[L],
        classes: &[String],
    ) -> Result<Self> {
        if y_true.len() != y_pred.len() {
            return Err(Error::Shape(format!(
                "{} true labels but {} predictions",
                y_true.len(),
                y_pred.len()
            )));
        }
        let index: HashMap<&str, usize> = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let lookup = |l: &L| {
            index.get(l.as_ref()).copied().ok_or_else(|| {
                Error::Config(format!("label `{}` is not in the class set", l.as_ref()))
            })
        };
        let k = classes.len();
        let mut counts = ConfusionCounts {
            tp: vec![0; k],
            fp: vec![0; k],
            fn_: vec![0; k],
        };
        for (t, p) in y_true.iter().zip(y_pred) {
            let (t, p) = (lookup(t)?, lookup(p)?);
            if t == p {
                counts.tp[t] += 1;
            } else {
                counts.fp[p] += 1;
                counts.fn_[t] += 1;
            }
        }
        Ok(counts)
    }
}

fn f1(tp: usize, fp: usize, fn_: usize) -> f64 {
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        0.0
    } else {
        2.0 * tp as f64 / denom as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct F1Scores {
    pub macro_f1: f64,
    pub micro_f1: f64,
    pub per_class: Vec<f64>,
}

/// Macro- and micro-averaged F1. The macro average runs over every class in
/// `classes`, including those absent from `y_true`.
pub fn f1_scores<L: AsRef<str>>(y_true: &[L], y_pred: &[L], classes: &[String]) -> Result<F1Scores> {
    if y_true.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let counts = ConfusionCounts::from_predictions(y_true, y_pred, classes)?;
    let per_class: Vec<f64> = (0..classes.len())
        .map(|i| f1(counts.tp[i], counts.fp[i], counts.fn_[i]))
        .collect();
    let macro_f1 = if per_class.is_empty() {
        0.0
    } else {
        per_class.iter().sum::<f64>() / per_class.len() as f64
    };
    let micro_f1 = f1(
        counts.tp.iter().sum(),
        counts.fp.iter().sum(),
        counts.fn_.iter().sum(),
    );
    Ok(F1Scores {
        macro_f1,
        micro_f1,
        per_class,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McNemarResult {
    /// A correct, B wrong.
    pub b: usize,
    /// A wrong, B correct.
    pub c: usize,
    /// Continuity-corrected chi-squared statistic; `None` on the exact path.
    pub statistic: Option<f64>,
    pub p: f64,
    pub exact: bool,
    pub significant: bool,
}

/// Two-sided exact binomial p-value for `b` vs `c` discordant pairs.
pub fn exact_binomial_p(b: usize, c: usize) -> f64 {
    let n = b + c;
    if n == 0 {
        return 1.0;
    }
    let k = b.min(c);
    let mut coef = 1.0f64;
    let mut tail = 0.0f64;
    for i in 0..=k {
        if i > 0 {
            coef = coef * (n - i + 1) as f64 / i as f64;
        }
        tail += coef;
    }
    (2.0 * tail * 0.5f64.powi(n as i32)).min(1.0)
}

/// Continuity-corrected McNemar statistic `(|b − c| − 1)² / (b + c)` and its
/// p-value under one degree of freedom.
pub fn mcnemar_chi2(b: usize, c: usize) -> (f64, f64) {
    let n = (b + c) as f64;
    if n == 0.0 {
        return (0.0, 1.0);
    }
    let d = (b as f64 - c as f64).abs() - 1.0;
    let stat = d.max(0.0).powi(2) / n;
    let chi = ChiSquared::new(1.0).expect("one degree of freedom");
    (stat, 1.0 - chi.cdf(stat))
}

/// McNemar's test on two paired correctness vectors.
pub fn mcnemar(correct_a: &[bool], correct_b: &[bool]) -> Result<McNemarResult> {
    if correct_a.len() != correct_b.len() {
        return Err(Error::Shape(format!(
            "{} vs {} paired outcomes",
            correct_a.len(),
            correct_b.len()
        )));
    }
    let mut b = 0;
    let mut c = 0;
    for (&a, &bb) in correct_a.iter().zip(correct_b) {
        match (a, bb) {
            (true, false) => b += 1,
            (false, true) => c += 1,
            _ => {}
        }
    }
    Ok(mcnemar_from_counts(b, c))
}

pub fn mcnemar_from_counts(b: usize, c: usize) -> McNemarResult {
    if b + c < EXACT_THRESHOLD {
        let p = exact_binomial_p(b, c);
        McNemarResult {
            b,
            c,
            statistic: None,
            p,
            exact: true,
            significant: p < ALPHA,
        }
    } else {
        let (stat, p) = mcnemar_chi2(b, c);
        McNemarResult {
            b,
            c,
            statistic: Some(stat),
            p,
            exact: false,
            significant: p < ALPHA,
        }
    }
}

/// Relative change in percent; `None` when the baseline is zero.
pub fn delta_percent(with: f64, without: f64) -> Option<f64> {
    if without == 0.0 {
        None
    } else {
        Some(100.0 * (with - without) / without)
    }
}

/// Rounds to two decimals for reporting.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
