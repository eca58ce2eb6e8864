//! End-to-end evaluation and report formatting.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::compose::{compose_sentence, ModelId, Resources};
use super::dataset::{Dataset, Grouping};
use super::stats::{classify_triplets, cosine, spearman_rho, t_test_report, TTestOptions};
use super::ExperimentError;
use crate::embeddings::{by_verb, relational_verb, EmbeddingStore, SvoOccurrence};

/// One embedding space under a display name.
#[derive(Clone, Debug)]
pub struct EmbeddingSource {
    pub name: String,
    pub resources: Resources,
}

impl EmbeddingSource {
    /// Builds relational matrices for every verb with usable occurrences.
    pub fn new(
        name: impl Into<String>,
        words: EmbeddingStore,
        occurrences: &[SvoOccurrence],
        ignore_counts: bool,
    ) -> Self {
        let verbs = by_verb(occurrences)
            .into_iter()
            .filter_map(|(verb, occs)| match relational_verb(&occs, &words, ignore_counts) {
                Ok(m) => Some((verb, m.data)),
                Err(e) => {
                    log::warn!("no matrix for `{verb}`: {e}");
                    None
                }
            })
            .collect();
        EmbeddingSource {
            name: name.into(),
            resources: Resources {
                words,
                verbs,
                sentences: None,
            },
        }
    }

    pub fn with_sentences(mut self, sentences: EmbeddingStore) -> Self {
        self.resources.sentences = Some(sentences);
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct EvalConfig {
    pub grouping: Grouping,
    pub ttest: TTestOptions,
    /// Explicit `(pair 1-2, pair 1-3)` triplets; derived from the dataset when absent.
    pub triplets: Option<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    pub model: ModelId,
    pub embedding_source: String,
    pub spearman_rho: f64,
    pub mean_t_score: f64,
    pub classification_accuracy: f64,
    pub per_pair_cosines: Vec<f64>,
}

/// Cosines between the two sentences of every record, in record order.
pub fn pair_cosines(dataset: &Dataset, model: ModelId, res: &Resources) -> Result<Vec<f64>, ExperimentError> {
    dataset
        .records
        .par_iter()
        .map(|r| {
            let a = compose_sentence(model, &r.first, res)?;
            let b = compose_sentence(model, &r.second, res)?;
            cosine(&a, &b)
        })
        .collect()
}

/// One report per `(model, source)` pair, sources outermost.
///
/// Models that need sentence vectors are skipped for sources without them.
pub fn run_evaluation(
    dataset: &Dataset,
    models: &[ModelId],
    sources: &[EmbeddingSource],
    cfg: &EvalConfig,
) -> Result<Vec<EvaluationReport>, ExperimentError> {
    if dataset.len() < 2 {
        return Err(ExperimentError::Config("the dataset needs at least two records".into()));
    }
    let human = dataset.human_scores();
    let groups = dataset.groups(cfg.grouping);
    let triplets = cfg.triplets.clone().unwrap_or_else(|| dataset.derived_triplets());
    let mut reports = Vec::new();
    for src in sources {
        for &model in models {
            if model == ModelId::ExternalSentenceVectors && src.resources.sentences.is_none() {
                log::info!("skipping {model} for {}: no sentence vectors", src.name);
                continue;
            }
            let cos = pair_cosines(dataset, model, &src.resources)?;
            let t = t_test_report(&groups, &human, &cos, cfg.ttest)?;
            reports.push(EvaluationReport {
                model,
                embedding_source: src.name.clone(),
                spearman_rho: spearman_rho(&cos, &human)?,
                mean_t_score: t.mean_t,
                classification_accuracy: classify_triplets(&triplets, &cos, &human)?,
                per_pair_cosines: cos,
            });
        }
    }
    Ok(reports)
}

/// `model  embeddings  spearman_rho  mean_t  accuracy`, fixed precision.
pub fn reports_tsv(reports: &[EvaluationReport]) -> String {
    let mut out = String::from("model\tembeddings\tspearman_rho\tmean_t\taccuracy\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{}\t{}\t{:.6}\t{:.6}\t{:.6}",
            r.model, r.embedding_source, r.spearman_rho, r.mean_t_score, r.classification_accuracy
        );
    }
    out
}

/// `model  embeddings  pair  cosine` for every pair.
pub fn cosines_tsv(reports: &[EvaluationReport]) -> String {
    let mut out = String::from("model\tembeddings\tpair\tcosine\n");
    for r in reports {
        for (i, c) in r.per_pair_cosines.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}\t{}\t{:.9}", r.model, r.embedding_source, i, c);
        }
    }
    out
}

/// A plain-text table, one row per model with a line per embedding source.
pub fn reports_table(reports: &[EvaluationReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<18} {:<12} {:>10} {:>10} {:>10}",
        "Model", "Embeddings", "Spearman", "mean t", "Accuracy"
    );
    let _ = writeln!(out, "{}", "-".repeat(64));
    let mut models: Vec<ModelId> = Vec::new();
    for r in reports {
        if !models.contains(&r.model) {
            models.push(r.model);
        }
    }
    for m in models {
        let mut first = true;
        for r in reports.iter().filter(|r| r.model == m) {
            let label = if first { m.title() } else { "" };
            first = false;
            let _ = writeln!(
                out,
                "{:<18} {:<12} {:>10.3} {:>10.2} {:>9.2}%",
                label,
                r.embedding_source,
                r.spearman_rho,
                r.mean_t_score,
                100.0 * r.classification_accuracy
            );
        }
    }
    out
}
