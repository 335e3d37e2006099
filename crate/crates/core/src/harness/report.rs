use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{GridPoint, SetupOutcome};
use crate::corpus::SplitPlan;
use crate::evaluation::{delta_percent, mcnemar, round2};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train: usize,
    pub validation: usize,
    pub test: usize,
}

impl SplitCounts {
    pub fn of(plan: &SplitPlan) -> Self {
        SplitCounts {
            train: plan.train.len(),
            validation: plan.validation.len(),
            test: plan.test.len(),
        }
    }
}

/// McNemar summary of a row against its baseline. `b` counts test fragments
/// only this row got right, `c` those only the baseline got right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonStats {
    pub b: usize,
    pub c: usize,
    pub p: f64,
    pub significant: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub setup: String,
    #[serde(rename = "F1M")]
    pub f1_macro: f64,
    #[serde(rename = "F1mu")]
    pub f1_micro: f64,
    /// Percent change over the baseline, two decimals.
    #[serde(rename = "deltaM")]
    pub delta_macro: Option<f64>,
    #[serde(rename = "deltaMu")]
    pub delta_micro: Option<f64>,
    pub mcnemar: Option<ComparisonStats>,
    #[serde(rename = "C")]
    pub c: f64,
    pub r: Option<f64>,
    pub baseline: Option<String>,
    pub n_features: usize,
    pub plan_hash: String,
    pub grid: Vec<GridPoint>,
}

impl ReportRow {
    pub(crate) fn new(outcome: &SetupOutcome, baseline: Option<&SetupOutcome>, plan_hash: &str) -> Result<Self> {
        let mut row = ReportRow {
            setup: outcome.setup.to_string(),
            f1_macro: outcome.scores.macro_f1,
            f1_micro: outcome.scores.micro_f1,
            delta_macro: None,
            delta_micro: None,
            mcnemar: None,
            c: outcome.c,
            r: outcome.r,
            baseline: None,
            n_features: outcome.n_features,
            plan_hash: plan_hash.to_string(),
            grid: outcome.grid.clone(),
        };
        if let Some(base) = baseline {
            let m = mcnemar(&outcome.correct, &base.correct)?;
            row.baseline = Some(base.setup.to_string());
            row.delta_macro = delta_percent(outcome.scores.macro_f1, base.scores.macro_f1).map(round2);
            row.delta_micro = delta_percent(outcome.scores.micro_f1, base.scores.micro_f1).map(round2);
            row.mcnemar = Some(ComparisonStats {
                b: m.b,
                c: m.c,
                p: m.p,
                significant: m.significant,
            });
        }
        Ok(row)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub toolkit_version: String,
    pub seed: u64,
    pub plan_hash: String,
    pub counts: SplitCounts,
    pub rows: Vec<ReportRow>,
}

fn signed(x: Option<f64>) -> String {
    match x {
        Some(d) => format!("{d:+.2}"),
        None => "n/a".into(),
    }
}

impl ExperimentReport {
    pub fn row(&self, setup: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.setup == setup)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Paired comparison table. Rows with a baseline show the change and a
    /// dagger when McNemar's test rejects equal error rates.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("| Setup | F1M | ΔM% | F1μ | Δμ% | McNemar p | C | r |\n");
        out.push_str("|---|---:|---:|---:|---:|---:|---:|---:|\n");
        for row in &self.rows {
            let p = match &row.mcnemar {
                Some(m) => format!("{:.4}{}", m.p, if m.significant { " †" } else { "" }),
                None => String::new(),
            };
            let r = row.r.map_or(String::new(), |r| format!("{r}"));
            let (dm, du) = if row.baseline.is_some() {
                (signed(row.delta_macro), signed(row.delta_micro))
            } else {
                (String::new(), String::new())
            };
            let _ = writeln!(
                out,
                "| {} | {:.3} | {} | {:.3} | {} | {} | {} | {} |",
                row.setup, row.f1_macro, dm, row.f1_micro, du, p, row.c, r
            );
        }
        let _ = writeln!(
            out,
            "\nsplit {} (train {}, validation {}, test {}), seed {}",
            &self.plan_hash[..12.min(self.plan_hash.len())],
            self.counts.train,
            self.counts.validation,
            self.counts.test,
            self.seed
        );
        out
    }
}
