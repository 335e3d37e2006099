//! One-vs-rest linear SVM.
//!
//! Each class gets an L2-regularized squared-hinge separator trained by dual
//! coordinate descent with shrinking. The intercept is learned through an
//! extra constant feature of value 1.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::features::SparseMatrix;
use crate::{Error, Result};

/// Stopping tolerance on the projected-gradient gap.
pub const TOLERANCE: f64 = 1e-4;
/// Upper bound on outer iterations per binary problem.
pub const MAX_ITER: usize = 10_000;

const MODEL_FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    format: u32,
    pub classes: Vec<String>,
    /// One weight vector per class, over the feature columns.
    pub weights: Vec<Vec<f64>>,
    pub intercepts: Vec<f64>,
    pub c: f64,
    /// Outer iterations each binary problem needed.
    pub iterations: Vec<usize>,
}

/// Solves `min ½‖w‖² + C Σ max(0, 1 − yᵢ wᵀxᵢ)²` in the dual. The last
/// component of the returned vector is the intercept.
fn solve_binary(x: &SparseMatrix, y: &[f64], c: f64) -> (Vec<f64>, usize) {
    let l = x.n_rows();
    let n = x.n_cols();
    let diag = 0.5 / c;
    let mut w = vec![0.0; n + 1];
    let mut alpha = vec![0.0; l];
    let qd: Vec<f64> = (0..l)
        .map(|i| diag + x.row(i).1.iter().map(|v| v * v).sum::<f64>() + 1.0)
        .collect();

    let dot = |w: &[f64], i: usize| x.row_dot(i, w) + w[n];

    let mut index: Vec<usize> = (0..l).collect();
    let mut active = l;
    let mut pg_max_old = f64::INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut iter = 0;

    while iter < MAX_ITER {
        let mut pg_max_new = f64::NEG_INFINITY;
        let mut pg_min_new = f64::INFINITY;
        index[..active].shuffle(&mut rng);

        let mut s = 0;
        while s < active {
            let i = index[s];
            let yi = y[i];
            let g = yi * dot(&w, i) - 1.0 + alpha[i] * diag;

            let mut pg = 0.0;
            if alpha[i] == 0.0 {
                if g > pg_max_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                } else if g < 0.0 {
                    pg = g;
                }
            } else {
                pg = g;
            }
            pg_max_new = pg_max_new.max(pg);
            pg_min_new = pg_min_new.min(pg);

            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (alpha[i] - g / qd[i]).max(0.0);
                let d = (alpha[i] - old) * yi;
                for (j, v) in x.row_iter(i) {
                    w[j] += d * v;
                }
                w[n] += d;
            }
            s += 1;
        }
        iter += 1;

        if pg_max_new - pg_min_new <= TOLERANCE {
            if active == l {
                break;
            }
            active = l;
            pg_max_old = f64::INFINITY;
            continue;
        }
        pg_max_old = if pg_max_new <= 0.0 { f64::INFINITY } else { pg_max_new };
    }
    (w, iter)
}

impl LinearModel {
    /// Trains one separator per distinct label (sorted order).
    pub fn train<L: AsRef<str> + Sync>(x: &SparseMatrix, y: &[L], c: f64) -> Result<Self> {
        if x.n_rows() != y.len() {
            return Err(Error::Shape(format!("{} rows but {} labels", x.n_rows(), y.len())));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Config(format!("C must be positive, got {c}")));
        }
        let classes: Vec<String> = y
            .iter()
            .map(|l| l.as_ref().to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if classes.len() < 2 {
            return Err(Error::DegenerateLabels);
        }

        let solved: Vec<(Vec<f64>, usize)> = classes
            .par_iter()
            .map(|class| {
                let targets: Vec<f64> = y
                    .iter()
                    .map(|l| if l.as_ref() == class { 1.0 } else { -1.0 })
                    .collect();
                solve_binary(x, &targets, c)
            })
            .collect();

        let n = x.n_cols();
        let mut weights = Vec::with_capacity(classes.len());
        let mut intercepts = Vec::with_capacity(classes.len());
        let mut iterations = Vec::with_capacity(classes.len());
        for (mut w, iter) in solved {
            intercepts.push(w[n]);
            w.truncate(n);
            weights.push(w);
            iterations.push(iter);
        }
        Ok(LinearModel {
            format: MODEL_FORMAT,
            classes,
            weights,
            intercepts,
            c,
            iterations,
        })
    }

    pub fn n_features(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    fn check_width(&self, x: &SparseMatrix) -> Result<()> {
        if x.n_cols() != self.n_features() {
            return Err(Error::Shape(format!(
                "model has {} features, matrix has {} columns",
                self.n_features(),
                x.n_cols()
            )));
        }
        Ok(())
    }

    /// Per-row, per-class decision values.
    pub fn decision_function(&self, x: &SparseMatrix) -> Result<Vec<Vec<f64>>> {
        self.check_width(x)?;
        Ok((0..x.n_rows())
            .map(|i| {
                self.weights
                    .iter()
                    .zip(&self.intercepts)
                    .map(|(w, b)| x.row_dot(i, w) + b)
                    .collect()
            })
            .collect())
    }

    /// Index into [`classes`](Self::classes) of the highest decision value;
    /// ties go to the lowest index.
    pub fn predict_indices(&self, x: &SparseMatrix) -> Result<Vec<usize>> {
        Ok(self
            .decision_function(x)?
            .iter()
            .map(|scores| argmax(scores))
            .collect())
    }

    pub fn predict(&self, x: &SparseMatrix) -> Result<Vec<String>> {
        Ok(self
            .predict_indices(x)?
            .into_iter()
            .map(|k| self.classes[k].clone())
            .collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let model: LinearModel = serde_json::from_str(s)?;
        if model.format != MODEL_FORMAT {
            return Err(Error::Config(format!("unsupported model format {}", model.format)));
        }
        Ok(model)
    }
}

pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (k, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = k;
        }
    }
    best
}
