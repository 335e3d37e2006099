use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Fragment, Partition, SplitPlan};
use crate::distortion::{all_views, fake_encode, EncodedView, FakeDictionary, FunctionWordList};
use crate::features::base_features;
use crate::prosody::{scan_fragment, MacronLexicon, QuantityString};

/// Every encoding of one fragment, computed up front.
#[derive(Clone, Debug)]
pub struct EncodedFragment {
    pub author: String,
    pub base: Vec<f64>,
    pub dv: [EncodedView; 4],
    pub sq: EncodedView,
    pub fake: EncodedView,
}

/// Encodes fragments in parallel; output order follows input order.
///
/// A fragment with no scannable sentence gets an empty SQ view.
pub fn encode_fragments(
    fragments: &[Fragment],
    lexicon: &MacronLexicon,
    fake: &FakeDictionary,
    function_words: &FunctionWordList,
) -> Vec<EncodedFragment> {
    fragments
        .par_iter()
        .map(|f| {
            let text = f.text();
            let sq = match scan_fragment(&f.sentences, lexicon) {
                Ok(q) => EncodedView::from_scansion(&q),
                Err(_) => EncodedView::from_scansion(&QuantityString::new()),
            };
            EncodedFragment {
                author: f.author.clone(),
                base: base_features(&f.sentences, function_words).to_vec(),
                dv: all_views(&text, function_words),
                sq,
                fake: fake_encode(&text, fake),
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Phase {
    GridSearch,
    Refit,
    Evaluate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AuditEvent {
    Phase(Phase),
    Read { partition: Partition, rows: usize },
}

/// Observer of partition reads inside an experiment.
pub trait AccessAudit: Sync {
    fn record(&self, event: AuditEvent);
}

pub struct NoAudit;

impl AccessAudit for NoAudit {
    fn record(&self, _: AuditEvent) {}
}

/// Records every event in order.
#[derive(Default)]
pub struct AuditLog {
    events: Mutex<Vec<AuditEvent>>,
}

impl AuditLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn events(&self) -> Vec<AuditEvent> {
        self.events.lock().expect("audit log poisoned").clone()
    }
}

impl AccessAudit for AuditLog {
    fn record(&self, event: AuditEvent) {
        self.events.lock().expect("audit log poisoned").push(event);
    }
}

/// Encoded fragments behind a split plan. Every read goes through the audit.
pub struct SplitData<'a> {
    fragments: &'a [EncodedFragment],
    plan: &'a SplitPlan,
    audit: &'a dyn AccessAudit,
}

impl<'a> SplitData<'a> {
    pub fn new(
        fragments: &'a [EncodedFragment],
        plan: &'a SplitPlan,
        audit: &'a dyn AccessAudit,
    ) -> Self {
        SplitData {
            fragments,
            plan,
            audit,
        }
    }

    pub fn plan(&self) -> &SplitPlan {
        self.plan
    }

    pub(crate) fn enter(&self, phase: Phase) {
        self.audit.record(AuditEvent::Phase(phase));
    }

    /// Fragments of the given partitions, in partition then index order.
    pub fn read(&self, partitions: &[Partition]) -> Vec<&'a EncodedFragment> {
        let mut out = Vec::new();
        for &p in partitions {
            let idx = self.plan.indices(p);
            self.audit.record(AuditEvent::Read {
                partition: p,
                rows: idx.len(),
            });
            out.extend(idx.iter().map(|&i| &self.fragments[i]));
        }
        out
    }
}
