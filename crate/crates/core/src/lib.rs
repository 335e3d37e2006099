//! Latin stylometry built on syllabic quantity.
//!
//! The crate covers the whole path from raw Latin prose to an authorship
//! attribution report:
//!
//! * [`prosody`] scans sentences into long / short / anceps symbols and
//!   detects accentual cursus endings.
//! * [`distortion`] masks topical content (DVMA, DVSA, DVEX, DVL2) and builds
//!   the FAKE control encoding.
//! * [`corpus`] cleans documents, splits sentences, cuts fragments and
//!   produces stratified train / validation / test plans.
//! * [`features`] builds the 205 base features and TFIDF-weighted character
//!   n-gram blocks with chi-squared selection.
//! * [`classifier`] is a one-vs-rest linear SVM (squared hinge, dual
//!   coordinate descent).
//! * [`evaluation`] computes F1 scores and McNemar's test.
//! * [`harness`] runs grid-searched experiments and emits comparison reports.

pub mod classifier;
pub mod corpus;
pub mod distortion;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod harness;
pub mod prosody;
pub mod synthetic;

pub use error::{Error, Result};
