//! End-to-end experiments: encode, split, grid-search, refit, evaluate and
//! compare each setup against its twin without the rhythmic block.

mod data;
mod report;
mod setup;

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use data::{
    encode_fragments, AccessAudit, AuditEvent, AuditLog, EncodedFragment, NoAudit, Phase, SplitData,
};
pub use report::{ComparisonStats, ExperimentReport, ReportRow, SplitCounts};
pub use setup::{Extra, Setup};

use crate::classifier::LinearModel;
use crate::corpus::{fragment_corpus, load_corpus, stratified_split, Document, Fragment, Partition, SplitPlan, FRAGMENT_SIZE};
use crate::distortion::{DvMethod, EncodedView, FakeDictionary, FunctionWordList, Method};
use crate::evaluation::{f1_scores, F1Scores};
use crate::features::{FeatureSpace, NGramSpec, SparseMatrix, BASE_DIM};
use crate::prosody::MacronLexicon;
use crate::{Error, Result};

pub const C_GRID: [f64; 7] = [0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0];
pub const R_GRID: [f64; 6] = [0.1, 0.2, 0.3, 0.4, 0.5, 1.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub corpus: PathBuf,
    pub lexicon: Option<PathBuf>,
    pub seed: u64,
    pub setups: Vec<Setup>,
    pub c_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub fragment_size: usize,
}

impl ExperimentConfig {
    /// Every standard setup with the default grids.
    pub fn new(corpus: impl Into<PathBuf>, seed: u64) -> Self {
        ExperimentConfig {
            corpus: corpus.into(),
            lexicon: None,
            seed,
            setups: Setup::standard(),
            c_grid: C_GRID.to_vec(),
            r_grid: R_GRID.to_vec(),
            fragment_size: FRAGMENT_SIZE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.setups.is_empty() {
            return Err(Error::Config("no setups requested".into()));
        }
        for s in &self.setups {
            s.validate()?;
        }
        if self.c_grid.is_empty() || self.c_grid.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
            return Err(Error::Config("C grid must be non-empty and positive".into()));
        }
        if self.r_grid.is_empty() || self.r_grid.iter().any(|r| !(*r > 0.0 && *r <= 1.0)) {
            return Err(Error::Config("r grid must be non-empty and within (0, 1]".into()));
        }
        if self.fragment_size == 0 {
            return Err(Error::Config("fragment size must be positive".into()));
        }
        Ok(())
    }
}

/// Fragments, their encodings and the shared split of one corpus.
pub struct PreparedCorpus {
    pub fragments: Vec<Fragment>,
    pub encoded: Vec<EncodedFragment>,
    pub plan: SplitPlan,
}

impl PreparedCorpus {
    pub fn new(documents: &[Document], lexicon: &MacronLexicon, seed: u64, fragment_size: usize) -> Result<Self> {
        let fragments = fragment_corpus(documents, fragment_size)?;
        let plan = stratified_split(&fragments, seed)?;
        let encoded = encode_fragments(
            &fragments,
            lexicon,
            &FakeDictionary::new(seed),
            &FunctionWordList::latin(),
        );
        Ok(PreparedCorpus {
            fragments,
            encoded,
            plan,
        })
    }
}

/// Validation outcome of one (C, r) configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    #[serde(rename = "C")]
    pub c: f64,
    pub r: Option<f64>,
    pub validation_macro_f1: Option<f64>,
    pub error: Option<String>,
}

/// Test-set outcome of one setup.
#[derive(Clone, Debug, PartialEq)]
pub struct SetupOutcome {
    pub setup: Setup,
    pub c: f64,
    pub r: Option<f64>,
    pub scores: F1Scores,
    pub predictions: Vec<String>,
    pub correct: Vec<bool>,
    pub n_features: usize,
    pub grid: Vec<GridPoint>,
}

/// Spaces fitted on one set of training fragments.
struct FittedBlocks {
    dv: Vec<(DvMethod, FeatureSpace)>,
    extra: Option<FeatureSpace>,
}

fn dv_index(m: DvMethod) -> usize {
    DvMethod::ALL.iter().position(|&x| x == m).expect("method is listed")
}

fn extra_view(f: &EncodedFragment, extra: Extra) -> &EncodedView {
    match extra {
        Extra::Sq => &f.sq,
        Extra::Fake => &f.fake,
    }
}

fn class_indices(frags: &[&EncodedFragment], classes: &[String]) -> Vec<usize> {
    let index: HashMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    frags.iter().map(|f| index[f.author.as_str()]).collect()
}

fn classes_of(frags: &[&EncodedFragment]) -> Vec<String> {
    frags
        .iter()
        .map(|f| f.author.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

impl FittedBlocks {
    fn fit(setup: &Setup, train: &[&EncodedFragment]) -> Result<Self> {
        let dv = setup
            .dv
            .iter()
            .map(|&m| {
                let views: Vec<EncodedView> = train.iter().map(|f| f.dv[dv_index(m)].clone()).collect();
                Ok((m, FeatureSpace::fit(&views, NGramSpec::DV)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let extra = match setup.extra {
            None => None,
            Some(e) => {
                let views: Vec<EncodedView> = train.iter().map(|f| extra_view(f, e).clone()).collect();
                let classes = classes_of(train);
                let labels = class_indices(train, &classes);
                Some(FeatureSpace::fit_with_selection(&views, NGramSpec::SQ, &labels, 1.0)?)
            }
        };
        Ok(FittedBlocks { dv, extra })
    }

    /// Base and distorted-view blocks, which do not depend on r.
    fn fixed_block(&self, frags: &[&EncodedFragment]) -> Result<SparseMatrix> {
        let base = SparseMatrix::from_dense(
            &frags.iter().map(|f| f.base.clone()).collect::<Vec<_>>(),
            BASE_DIM,
        );
        let mut blocks = vec![base];
        for (m, space) in &self.dv {
            let views: Vec<EncodedView> = frags.iter().map(|f| f.dv[dv_index(*m)].clone()).collect();
            blocks.push(space.transform(&views));
        }
        SparseMatrix::hstack(&blocks.iter().collect::<Vec<_>>())
    }

    /// The rhythmic block over the full vocabulary, before selection.
    fn extra_full(&self, setup: &Setup, frags: &[&EncodedFragment]) -> Option<SparseMatrix> {
        let (space, e) = (self.extra.as_ref()?, setup.extra?);
        let views: Vec<EncodedView> = frags.iter().map(|f| extra_view(f, e).clone()).collect();
        Some(space.weigh(&views))
    }
}

fn with_extra(fixed: &SparseMatrix, extra: Option<&SparseMatrix>, space: Option<&FeatureSpace>, r: Option<f64>) -> Result<SparseMatrix> {
    match (extra, space, r) {
        (Some(full), Some(space), Some(r)) => {
            let space = space.clone().with_ratio(r)?;
            let selected = full.select_columns(space.selection());
            SparseMatrix::hstack(&[fixed, &selected])
        }
        _ => Ok(fixed.clone()),
    }
}

fn labels_of(frags: &[&EncodedFragment]) -> Vec<String> {
    frags.iter().map(|f| f.author.clone()).collect()
}

fn evaluate_point(
    c: f64,
    r: Option<f64>,
    blocks: &FittedBlocks,
    train: (&SparseMatrix, Option<&SparseMatrix>, &[String]),
    val: (&SparseMatrix, Option<&SparseMatrix>, &[String]),
) -> Result<f64> {
    let x_train = with_extra(train.0, train.1, blocks.extra.as_ref(), r)?;
    let x_val = with_extra(val.0, val.1, blocks.extra.as_ref(), r)?;
    let model = LinearModel::train(&x_train, train.2, c)?;
    let pred = model.predict(&x_val)?;
    Ok(f1_scores(val.2, &pred, &model.classes)?.macro_f1)
}

/// Grid-searches one setup on validation, refits on train ∪ validation and
/// scores the test partition.
///
/// Setups without a rhythmic block search C only. Ties in validation
/// macro-F1 go to the smaller C, then the smaller r. A grid point that fails
/// is recorded with its error and skipped.
pub fn run_setup(data: &SplitData, setup: &Setup, c_grid: &[f64], r_grid: &[f64]) -> Result<SetupOutcome> {
    setup.validate()?;

    data.enter(Phase::GridSearch);
    let train = data.read(&[Partition::Train]);
    let val = data.read(&[Partition::Validation]);
    let blocks = FittedBlocks::fit(setup, &train)?;
    let (train_fixed, val_fixed) = (blocks.fixed_block(&train)?, blocks.fixed_block(&val)?);
    let (train_extra, val_extra) = (blocks.extra_full(setup, &train), blocks.extra_full(setup, &val));
    let (y_train, y_val) = (labels_of(&train), labels_of(&val));

    let mut cs = c_grid.to_vec();
    cs.sort_by(f64::total_cmp);
    cs.dedup();
    let rs: Vec<Option<f64>> = if setup.selects_features() {
        let mut rs = r_grid.to_vec();
        rs.sort_by(f64::total_cmp);
        rs.dedup();
        rs.into_iter().map(Some).collect()
    } else {
        vec![None]
    };
    let points: Vec<(f64, Option<f64>)> = cs.iter().flat_map(|&c| rs.iter().map(move |&r| (c, r))).collect();

    let grid: Vec<GridPoint> = points
        .par_iter()
        .map(|&(c, r)| {
            let outcome = evaluate_point(
                c,
                r,
                &blocks,
                (&train_fixed, train_extra.as_ref(), &y_train),
                (&val_fixed, val_extra.as_ref(), &y_val),
            );
            match outcome {
                Ok(f1) => GridPoint { c, r, validation_macro_f1: Some(f1), error: None },
                Err(e) => GridPoint { c, r, validation_macro_f1: None, error: Some(e.to_string()) },
            }
        })
        .collect();

    let mut best: Option<&GridPoint> = None;
    for p in &grid {
        if let Some(f1) = p.validation_macro_f1 {
            if best.is_none_or(|b| f1 > b.validation_macro_f1.unwrap_or(f64::NEG_INFINITY)) {
                best = Some(p);
            }
        }
    }
    let best = best.ok_or_else(|| Error::Config(format!("setup `{setup}`: every grid point failed")))?;
    let (c, r) = (best.c, best.r);

    data.enter(Phase::Refit);
    let fit_set = data.read(&[Partition::Train, Partition::Validation]);
    let blocks = FittedBlocks::fit(setup, &fit_set)?;
    let x_fit = with_extra(
        &blocks.fixed_block(&fit_set)?,
        blocks.extra_full(setup, &fit_set).as_ref(),
        blocks.extra.as_ref(),
        r,
    )?;
    let model = LinearModel::train(&x_fit, &labels_of(&fit_set), c)?;

    data.enter(Phase::Evaluate);
    let test = data.read(&[Partition::Test]);
    let x_test = with_extra(
        &blocks.fixed_block(&test)?,
        blocks.extra_full(setup, &test).as_ref(),
        blocks.extra.as_ref(),
        r,
    )?;
    let y_test = labels_of(&test);
    let predictions = model.predict(&x_test)?;
    let scores = f1_scores(&y_test, &predictions, &model.classes)?;
    let correct = y_test.iter().zip(&predictions).map(|(t, p)| t == p).collect();

    Ok(SetupOutcome {
        setup: setup.clone(),
        c,
        r,
        scores,
        predictions,
        correct,
        n_features: x_fit.n_cols(),
        grid,
    })
}

/// Runs every configured setup on one shared split. Baselines missing from
/// the list are run for the comparison but get no row of their own.
pub fn run_prepared(
    config: &ExperimentConfig,
    corpus: &PreparedCorpus,
    audit: &dyn AccessAudit,
) -> Result<ExperimentReport> {
    config.validate()?;
    let data = SplitData::new(&corpus.encoded, &corpus.plan, audit);

    let mut needed: Vec<Setup> = Vec::new();
    for s in &config.setups {
        for t in [Some(s.clone()), s.baseline()].into_iter().flatten() {
            if !needed.contains(&t) {
                needed.push(t);
            }
        }
    }
    let mut outcomes: Vec<SetupOutcome> = Vec::with_capacity(needed.len());
    for s in &needed {
        outcomes.push(run_setup(&data, s, &config.c_grid, &config.r_grid)?);
    }
    let by_setup: HashMap<&Setup, &SetupOutcome> = outcomes.iter().map(|o| (&o.setup, o)).collect();

    let plan_hash = corpus.plan.fingerprint();
    let rows = config
        .setups
        .iter()
        .map(|s| {
            let outcome = by_setup[s];
            let baseline = s.baseline().map(|b| by_setup[&b]);
            ReportRow::new(outcome, baseline, &plan_hash)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentReport {
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        plan_hash,
        counts: SplitCounts::of(&corpus.plan),
        rows,
    })
}

fn load_lexicon(path: Option<&Path>) -> Result<MacronLexicon> {
    match path {
        Some(p) => MacronLexicon::load(p),
        None => Ok(MacronLexicon::new()),
    }
}

/// Loads the corpus and lexicon named by `config` and runs the experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_audited(config, &NoAudit)
}

pub fn run_experiment_audited(config: &ExperimentConfig, audit: &dyn AccessAudit) -> Result<ExperimentReport> {
    config.validate()?;
    let lexicon = load_lexicon(config.lexicon.as_deref())?;
    let documents = load_corpus(&config.corpus)?;
    let corpus = PreparedCorpus::new(&documents, &lexicon, config.seed, config.fragment_size)?;
    run_prepared(config, &corpus, audit)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

type ViewOf = Box<dyn Fn(&EncodedFragment) -> EncodedView>;

/// Files written by [`featurize`], relative to the output directory.
pub const PLAN_FILE: &str = "plan.json";
pub const LABELS_FILE: &str = "labels.txt";
pub const BASE_FILE: &str = "bfs.triplets";

/// Writes the split plan, labels, the base-feature matrix and one TFIDF
/// matrix with vocabulary per encoding. Spaces are fitted on the training
/// partition; every fragment gets a row.
pub fn featurize(corpus: &PreparedCorpus, out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let path = out.join(PLAN_FILE);
    let mut w = create(&path)?;
    serde_json::to_writer_pretty(&mut w, &corpus.plan.records(&corpus.fragments))?;
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = out.join(LABELS_FILE);
    let mut w = create(&path)?;
    for f in &corpus.fragments {
        writeln!(w, "{}", f.author).map_err(|e| Error::io(&path, e))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let all: Vec<&EncodedFragment> = corpus.encoded.iter().collect();
    let base = SparseMatrix::from_dense(&all.iter().map(|f| f.base.clone()).collect::<Vec<_>>(), BASE_DIM);
    let path = out.join(BASE_FILE);
    let mut w = create(&path)?;
    base.write_triplets(&mut w).map_err(|e| Error::io(&path, e))?;
    w.flush().map_err(|e| Error::io(&path, e))?;

    let train: Vec<&EncodedFragment> = corpus.plan.train.iter().map(|&i| &corpus.encoded[i]).collect();
    let mut encodings: Vec<(String, NGramSpec, ViewOf)> = DvMethod::ALL
        .iter()
        .map(|&m| {
            let get: ViewOf = Box::new(move |f| f.dv[dv_index(m)].clone());
            (Method::Dv(m).name().to_lowercase(), NGramSpec::DV, get)
        })
        .collect();
    encodings.push(("sq".into(), NGramSpec::SQ, Box::new(|f| f.sq.clone())));
    encodings.push(("fake".into(), NGramSpec::SQ, Box::new(|f| f.fake.clone())));

    for (name, spec, get) in encodings {
        let train_views: Vec<EncodedView> = train.iter().map(|f| get(f)).collect();
        let space = FeatureSpace::fit(&train_views, spec)?;
        let views: Vec<EncodedView> = all.iter().map(|f| get(f)).collect();
        let m = space.transform(&views);

        let path = out.join(format!("{name}.triplets"));
        let mut w = create(&path)?;
        m.write_triplets(&mut w).map_err(|e| Error::io(&path, e))?;
        w.flush().map_err(|e| Error::io(&path, e))?;

        let path = out.join(format!("{name}.vocab"));
        let mut w = create(&path)?;
        space.write_vocabulary(&mut w).map_err(|e| Error::io(&path, e))?;
        w.flush().map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
