//! Published figures, rerun on full-size assets.
//!
//! Point `SLLM_PINNED_ASSETS` at a directory holding `ellsim.tsv`, `svo.tsv`,
//! `word2vec.txt`, `fasttext.txt`, `bert.txt` (sentence vectors keyed by
//! sentence text) and optionally `triplets.tsv`. Words missing from an
//! embedding file get the zero vector.

use std::path::PathBuf;

use sllm::experiments::{
    compose_sentence, cosine, run_evaluation, Dataset, EmbeddingSource, EvalConfig, Half, ModelId,
};
use sllm::{load_occurrences, EmbeddingFormat, EmbeddingStore, UnknownWordPolicy};

pub enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn pinned_assets() -> Result<Verdict, String> {
    let Some(dir) = std::env::var_os("SLLM_PINNED_ASSETS").map(PathBuf::from) else {
        return Ok(Verdict::Skip("SLLM_PINNED_ASSETS is not set".into()));
    };
    let needed = ["ellsim.tsv", "svo.tsv", "word2vec.txt", "fasttext.txt", "bert.txt"];
    if let Some(missing) = needed.iter().find(|f| !dir.join(f).exists()) {
        return Ok(Verdict::Skip(format!("{} is missing", dir.join(missing).display())));
    }
    let dataset = Dataset::load(dir.join("ellsim.tsv")).map_err(err)?;
    let occs = load_occurrences(dir.join("svo.tsv")).map_err(err)?;
    let load = |f: &str| {
        EmbeddingStore::load(dir.join(f), EmbeddingFormat::Word2vecText)
            .map(|s| s.with_policy(UnknownWordPolicy::Zero))
            .map_err(err)
    };
    let w2v = EmbeddingSource::new("word2vec", load("word2vec.txt")?, &occs, false).with_sentences(load("bert.txt")?);
    let ft = EmbeddingSource::new("fasttext", load("fasttext.txt")?, &occs, false);
    let triplets = match dir.join("triplets.tsv") {
        p if p.exists() => Some(dataset.load_triplets(p).map_err(err)?),
        _ => None,
    };
    let cfg = EvalConfig {
        triplets,
        ..EvalConfig::default()
    };
    let models = [ModelId::Additive, ModelId::FrobAdd, ModelId::CopyObj, ModelId::ExternalSentenceVectors];
    let reports = run_evaluation(&dataset, &models, &[w2v.clone(), ft], &cfg).map_err(err)?;
    let get = |m: ModelId, src: &str| {
        reports
            .iter()
            .find(|r| r.model == m && r.embedding_source == src)
            .ok_or_else(|| format!("no report for {m} on {src}"))
    };
    let s1 = Half::parse_sentence("drug produce effect and combination does too").ok_or("bad sentence")?;
    let s2 = Half::parse_sentence("employee start work and team does too").ok_or("bad sentence")?;
    let c12 = cosine(
        &compose_sentence(ModelId::Additive, &s1, &w2v.resources).map_err(err)?,
        &compose_sentence(ModelId::Additive, &s2, &w2v.resources).map_err(err)?,
    )
    .map_err(err)?;
    let checks = [
        ("Additive fasttext rho", get(ModelId::Additive, "fasttext")?.spearman_rho, 0.783, 0.02),
        ("Frobenius Add. word2vec rho", get(ModelId::FrobAdd, "word2vec")?.spearman_rho, 0.653, 0.02),
        ("Frobenius Add. fasttext t", get(ModelId::FrobAdd, "fasttext")?.mean_t_score, 14.24, 0.5),
        ("sentence vectors t", get(ModelId::ExternalSentenceVectors, "word2vec")?.mean_t_score, 13.76, 0.5),
        ("Additive word2vec accuracy %", 100.0 * get(ModelId::Additive, "word2vec")?.classification_accuracy, 82.00, 2.0),
        ("Additive fasttext accuracy %", 100.0 * get(ModelId::Additive, "fasttext")?.classification_accuracy, 81.77, 2.0),
        ("Copy Object word2vec accuracy %", 100.0 * get(ModelId::CopyObj, "word2vec")?.classification_accuracy, 76.33, 2.0),
        ("Additive word2vec S1/S2 cosine", c12, 0.104, 0.02),
    ];
    let off: Vec<String> = checks
        .iter()
        .filter(|(_, got, want, tol)| (got - want).abs() > *tol)
        .map(|(name, got, want, tol)| format!("{name} {got:.3} vs {want} ± {tol}"))
        .collect();
    if off.is_empty() {
        Ok(Verdict::Pass(format!("{} figures within tolerance", checks.len())))
    } else {
        Ok(Verdict::Fail(off.join("; ")))
    }
}
