use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word `{0}` has no vowel nucleus")]
    NoNucleus(String),

    #[error("no sentence of the fragment could be scanned")]
    EmptyEncoding,

    #[error("document is empty after cleaning")]
    EmptyDocument,

    #[error("author `{author}` has {count} fragments, at least 3 are required for stratification")]
    Stratification { author: String, count: usize },

    #[error("no n-gram reaches the minimum count in the training views")]
    EmptyVocabulary,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("training labels contain a single class")]
    DegenerateLabels,

    #[error("cannot evaluate an empty prediction vector")]
    EmptyEvaluation,

    #[error("invalid lexicon entry at line {line}: {reason}")]
    Lexicon { line: usize, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("document `{document}`: {source}")]
    InDocument {
        document: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
