//! Pre-trained word vectors and subject-verb-object occurrence counts.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::tensor::{SpaceShape, TensorValue};

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: expected {expected} components, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("no vectors loaded")]
    Empty,
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("no usable occurrences for verb `{0}`")]
    NoOccurrences(String),
    #[error("unknown embedding format `{0}` (expected word2vec or glove)")]
    UnknownFormat(String),
}

pub(crate) fn read(path: &Path) -> Result<String, EmbeddingError> {
    fs::read_to_string(path).map_err(|source| EmbeddingError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingFormat {
    /// `word v1 … vD` rows, optionally preceded by a `count D` header.
    Word2vecText,
    /// `word v1 … vD` rows, no header.
    GloveText,
}

impl FromStr for EmbeddingFormat {
    type Err = EmbeddingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "word2vec" | "word2vec-text" => Ok(EmbeddingFormat::Word2vecText),
            "glove" | "glove-text" => Ok(EmbeddingFormat::GloveText),
            other => Err(EmbeddingError::UnknownFormat(other.to_string())),
        }
    }
}

/// What a lookup of an absent word returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum UnknownWordPolicy {
    #[default]
    Error,
    Zero,
    /// A pseudo-random vector derived from the word and the seed.
    HashRandom { seed: u64 },
}

#[derive(Clone, Debug)]
pub struct EmbeddingStore {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
    /// Words in file order, for deterministic iteration.
    words: Vec<String>,
    pub lowercase: bool,
    pub policy: UnknownWordPolicy,
}

impl EmbeddingStore {
    pub fn load(path: impl AsRef<Path>, format: EmbeddingFormat) -> Result<Self, EmbeddingError> {
        EmbeddingStore::parse(&read(path.as_ref())?, format)
    }

    pub fn parse(text: &str, format: EmbeddingFormat) -> Result<Self, EmbeddingError> {
        let mut store: Option<EmbeddingStore> = None;
        let mut header_dim = None;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            // A tab ends the key, so keys such as whole sentences may hold spaces.
            let (key, rest) = match line.split_once('\t') {
                Some((k, r)) => (k.trim(), r),
                None => {
                    let t = line.trim_start();
                    t.split_once(char::is_whitespace).unwrap_or((t, ""))
                }
            };
            if key.is_empty() {
                continue;
            }
            let mut toks: Vec<&str> = vec![key];
            toks.extend(rest.split_whitespace());
            if format == EmbeddingFormat::Word2vecText && store.is_none() && header_dim.is_none() && toks.len() == 2 {
                if let (Ok(_), Ok(d)) = (toks[0].parse::<usize>(), toks[1].parse::<usize>()) {
                    header_dim = Some(d);
                    continue;
                }
            }
            let values = toks[1..]
                .iter()
                .map(|t| t.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| EmbeddingError::Malformed {
                    line: line_no,
                    msg: e.to_string(),
                })?;
            let s = store.get_or_insert_with(|| EmbeddingStore::empty(header_dim.unwrap_or(values.len())));
            if values.len() != s.dim || values.is_empty() {
                return Err(EmbeddingError::Ragged {
                    line: line_no,
                    expected: s.dim,
                    found: values.len(),
                });
            }
            s.insert(key, values, line_no);
        }
        store.ok_or(EmbeddingError::Empty)
    }

    fn empty(dim: usize) -> Self {
        EmbeddingStore {
            dim,
            vectors: HashMap::new(),
            words: Vec::new(),
            lowercase: true,
            policy: UnknownWordPolicy::Error,
        }
    }

    /// Builds a store from in-memory pairs; all vectors must share one length.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, EmbeddingError>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: AsRef<str>,
    {
        let mut store: Option<EmbeddingStore> = None;
        for (i, (w, v)) in pairs.into_iter().enumerate() {
            let s = store.get_or_insert_with(|| EmbeddingStore::empty(v.len()));
            if v.len() != s.dim || v.is_empty() {
                return Err(EmbeddingError::Ragged {
                    line: i + 1,
                    expected: s.dim,
                    found: v.len(),
                });
            }
            s.insert(w.as_ref(), v, i + 1);
        }
        store.ok_or(EmbeddingError::Empty)
    }

    fn insert(&mut self, word: &str, v: Vec<f64>, line: usize) {
        let key = self.normalize(word);
        if self.vectors.contains_key(&key) {
            log::warn!("duplicate embedding for `{key}` on line {line}; keeping the first");
            return;
        }
        self.words.push(key.clone());
        self.vectors.insert(key, v);
    }

    pub fn with_policy(mut self, policy: UnknownWordPolicy) -> Self {
        self.policy = policy;
        self
    }

    fn normalize(&self, word: &str) -> String {
        if self.lowercase {
            word.to_lowercase()
        } else {
            word.to_string()
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// The stored vector, ignoring the unknown-word policy.
    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(&self.normalize(word)).map(Vec::as_slice)
    }

    /// The vector for `word`, falling back on the unknown-word policy.
    pub fn lookup(&self, word: &str) -> Result<Vec<f64>, EmbeddingError> {
        if let Some(v) = self.get(word) {
            return Ok(v.to_vec());
        }
        match self.policy {
            UnknownWordPolicy::Error => Err(EmbeddingError::UnknownWord(word.to_string())),
            UnknownWordPolicy::Zero => Ok(vec![0.0; self.dim]),
            UnknownWordPolicy::HashRandom { seed } => {
                let mut h = Sha256::new();
                h.update(seed.to_le_bytes());
                h.update(self.normalize(word).as_bytes());
                let digest = h.finalize();
                let mut key = [0u8; 32];
                key.copy_from_slice(&digest[..32]);
                let mut rng = ChaCha8Rng::from_seed(key);
                Ok((0..self.dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvoOccurrence {
    pub subject: String,
    pub verb: String,
    pub object: String,
    pub count: u64,
}

/// Reads `subject<TAB>verb<TAB>object[<TAB>count]` rows; a missing count means 1.
/// A first row starting `subject<TAB>verb` is a header.
pub fn parse_occurrences(text: &str) -> Result<Vec<SvoOccurrence>, EmbeddingError> {
    let mut out = Vec::new();
    let mut first = true;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if std::mem::take(&mut first) && cols.len() > 1 && cols[0].eq_ignore_ascii_case("subject") && cols[1].eq_ignore_ascii_case("verb") {
            continue;
        }
        let bad = |msg: &str| EmbeddingError::Malformed {
            line: i + 1,
            msg: msg.to_string(),
        };
        let count = match cols.len() {
            3 => 1,
            4 => cols[3].parse().map_err(|_| bad("count is not a non-negative integer"))?,
            _ => return Err(bad("expected subject, verb, object and optional count")),
        };
        if count == 0 {
            return Err(bad("count must be at least 1"));
        }
        out.push(SvoOccurrence {
            subject: cols[0].to_lowercase(),
            verb: cols[1].to_lowercase(),
            object: cols[2].to_lowercase(),
            count,
        });
    }
    Ok(out)
}

pub fn load_occurrences(path: impl AsRef<Path>) -> Result<Vec<SvoOccurrence>, EmbeddingError> {
    parse_occurrences(&read(path.as_ref())?)
}

/// `Σ count · s ⊗ o` over the usable occurrences, as a `D × D` matrix.
///
/// Occurrences whose subject or object has no vector are skipped with a
/// warning; `ignore_counts` weighs every listed occurrence once.
pub fn relational_verb(
    occurrences: &[SvoOccurrence],
    emb: &EmbeddingStore,
    ignore_counts: bool,
) -> Result<TensorValue, EmbeddingError> {
    let d = emb.dim();
    let mut m = vec![0.0; d * d];
    let mut used = 0;
    for occ in occurrences {
        let (Some(s), Some(o)) = (emb.get(&occ.subject), emb.get(&occ.object)) else {
            log::warn!(
                "skipping `{} {} {}`: no vector for subject or object",
                occ.subject,
                occ.verb,
                occ.object
            );
            continue;
        };
        let w = if ignore_counts { 1.0 } else { occ.count as f64 };
        for (i, si) in s.iter().enumerate() {
            for (j, oj) in o.iter().enumerate() {
                m[i * d + j] += w * si * oj;
            }
        }
        used += 1;
    }
    if used == 0 {
        let verb = occurrences.first().map(|o| o.verb.clone()).unwrap_or_default();
        return Err(EmbeddingError::NoOccurrences(verb));
    }
    Ok(TensorValue {
        shape: SpaceShape::Tensor(vec![SpaceShape::Base(d), SpaceShape::Base(d)]),
        data: m,
    })
}

/// Groups occurrences by verb, keeping first-appearance order.
pub fn by_verb(occurrences: &[SvoOccurrence]) -> Vec<(String, Vec<SvoOccurrence>)> {
    let mut out: Vec<(String, Vec<SvoOccurrence>)> = Vec::new();
    for occ in occurrences {
        match out.iter_mut().find(|(v, _)| *v == occ.verb) {
            Some((_, list)) => list.push(occ.clone()),
            None => out.push((occ.verb.clone(), vec![occ.clone()])),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_plain_and_headed_files() {
        let s = EmbeddingStore::parse("a 1 2 3 4\nb 0 0 0 1\nc 1 1 1 1\n", EmbeddingFormat::GloveText).unwrap();
        assert_eq!((s.len(), s.dim()), (3, 4));
        let w2v = format!("2 300\nx {}\ny {}\n", vec!["0.5"; 300].join(" "), vec!["1"; 300].join(" "));
        let s = EmbeddingStore::parse(&w2v, EmbeddingFormat::Word2vecText).unwrap();
        assert_eq!((s.len(), s.dim()), (2, 300));
    }

    #[test]
    fn tab_separated_keys_may_contain_spaces() {
        let s = EmbeddingStore::parse("a man runs\t1 2\nb\t3 4\n", EmbeddingFormat::GloveText).unwrap();
        assert_eq!(s.get("A Man Runs"), Some(&[1.0, 2.0][..]));
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn ragged_rows_name_the_line() {
        let err = EmbeddingStore::parse("a 1 2\nb 1\n", EmbeddingFormat::GloveText).unwrap_err();
        assert!(matches!(err, EmbeddingError::Ragged { line: 2, expected: 2, found: 1 }));
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn duplicates_keep_first_and_case_folds() {
        let s = EmbeddingStore::parse("Dog 1 0\ndog 0 1\n", EmbeddingFormat::GloveText).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.get("DOG"), Some(&[1.0, 0.0][..]));
    }

    #[test]
    fn unknown_word_policies() {
        let s = EmbeddingStore::parse("a 1 2\n", EmbeddingFormat::GloveText).unwrap();
        assert!(matches!(s.lookup("zz"), Err(EmbeddingError::UnknownWord(_))));
        let z = s.clone().with_policy(UnknownWordPolicy::Zero);
        assert_eq!(z.lookup("zz").unwrap(), vec![0.0, 0.0]);
        let h = s.with_policy(UnknownWordPolicy::HashRandom { seed: 7 });
        let v = h.lookup("zz").unwrap();
        assert_eq!(v, h.lookup("ZZ").unwrap());
        assert_ne!(v, h.lookup("yy").unwrap());
        assert!(v.iter().all(|x| x.abs() <= 1.0));
    }

    fn occ(s: &str, o: &str, count: u64) -> SvoOccurrence {
        SvoOccurrence {
            subject: s.into(),
            verb: "v".into(),
            object: o.into(),
            count,
        }
    }

    #[test]
    fn relational_outer_products() {
        let emb = EmbeddingStore::from_pairs([("s", vec![1.0, 0.0]), ("o", vec![0.0, 1.0])]).unwrap();
        let m = relational_verb(&[occ("s", "o", 1)], &emb, false).unwrap();
        assert_eq!(m.data, vec![0.0, 1.0, 0.0, 0.0]);
        let twice = relational_verb(&[occ("s", "o", 1), occ("s", "o", 1)], &emb, false).unwrap();
        assert_eq!(twice.data, vec![0.0, 2.0, 0.0, 0.0]);
        let counted = relational_verb(&[occ("s", "o", 3)], &emb, false).unwrap();
        assert_eq!(counted.data, vec![0.0, 3.0, 0.0, 0.0]);
        let flat = relational_verb(&[occ("s", "o", 3)], &emb, true).unwrap();
        assert_eq!(flat.data, m.data);
        assert!(relational_verb(&[], &emb, false).is_err());
        assert!(relational_verb(&[occ("x", "o", 1)], &emb, false).is_err());
    }

    #[test]
    fn occurrence_rows() {
        let occs = parse_occurrences("dog\tchase\tcat\t2\nman\tchase\tcar\n").unwrap();
        assert_eq!(occs[0].count, 2);
        assert_eq!(occs[1].count, 1);
        assert!(parse_occurrences("dog\tchase\n").is_err());
        assert!(parse_occurrences("a\tb\tc\t0\n").is_err());
    }
}
