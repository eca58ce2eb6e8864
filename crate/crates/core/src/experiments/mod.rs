//! The sentence-similarity pipeline: data, composition models and statistics.

pub mod compose;
pub mod dataset;
pub mod evaluate;
pub mod stats;

use std::path::PathBuf;

use thiserror::Error;

use crate::embeddings::EmbeddingError;

pub use compose::{compose_sentence, copy_obj, copy_subj, ModelId, Resources};
pub use dataset::{Band, Dataset, Grouping, Half, SimilarityRecord};
pub use evaluate::{
    cosines_tsv, pair_cosines, reports_table, reports_tsv, run_evaluation, EmbeddingSource, EvalConfig,
    EvaluationReport,
};
pub use stats::{
    average_ranks, classify_triplets, cosine, pearson, spearman_rho, t_statistic, t_test_report, TTestOptions,
    TTestReport,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Dataset { line: usize, msg: String },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("no relational matrix for verb `{0}`")]
    MissingVerb(String),
    #[error("{0}")]
    Stats(String),
    #[error("{0}")]
    Config(String),
}
