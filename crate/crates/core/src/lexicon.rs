//! Word-to-type assignments with their tensor inhabitants.
//!
//! A lexicon file is tab-separated: `word  formula  value-spec`, where the
//! value spec is one of
//!
//! - `embed`: the word's vector, truncated or zero-padded to the atom dimension
//! - `tilde` or `tilde:<spec>`: `1 + v + v⊗v + …` of the inner spec (default `embed`)
//! - `relational:<file>`: a verb built from subject/object occurrences
//! - `file:<file>`: a serialized tensor
//! - `identity`: the identity on `A` for a formula of space `A* ⊗ A`
//!
//! Relative paths resolve against the lexicon file's directory.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::embeddings::{load_occurrences, relational_verb, EmbeddingError, EmbeddingStore};
use crate::formula::{parse_formula, Formula, ParseError};
use crate::tensor::{fock_embed_tilde, shape_of, AtomDims, SemanticsError, SpaceShape, TensorValue};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error("line {line} (`{word}`): {source}")]
    Semantics {
        line: usize,
        word: String,
        source: SemanticsError,
    },
    #[error("line {line} (`{word}`): {source}")]
    Embedding {
        line: usize,
        word: String,
        source: EmbeddingError,
    },
    #[error("line {line} (`{word}`): {msg}")]
    Spec { line: usize, word: String, msg: String },
    #[error(transparent)]
    Io(#[from] EmbeddingError),
    #[error("no entry for word `{0}`")]
    UnknownWord(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LexiconEntry {
    pub word: String,
    pub formula: Formula,
    pub value: TensorValue,
}

impl LexiconEntry {
    /// Checks the value against the formula's space before building the entry.
    pub fn new(
        word: impl Into<String>,
        formula: Formula,
        value: TensorValue,
        dims: &AtomDims,
        k0: usize,
    ) -> Result<Self, SemanticsError> {
        let expected = shape_of(&formula, dims, k0)?;
        if expected != value.shape {
            return Err(SemanticsError::ShapeMismatch {
                expected,
                found: value.shape,
            });
        }
        Ok(LexiconEntry {
            word: word.into(),
            formula,
            value,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Lexicon {
    pub entries: Vec<LexiconEntry>,
}

impl Lexicon {
    /// First entry for `word` (case-insensitive).
    pub fn get(&self, word: &str) -> Option<&LexiconEntry> {
        self.entries.iter().find(|e| e.word.eq_ignore_ascii_case(word))
    }

    /// Looks up every word of a whitespace-separated sentence.
    pub fn sentence(&self, text: &str) -> Result<Vec<&LexiconEntry>, LexiconError> {
        text.split_whitespace()
            .map(|w| self.get(w).ok_or_else(|| LexiconError::UnknownWord(w.to_string())))
            .collect()
    }
}

/// Reads and builds a lexicon file.
pub fn build_lexicon(
    path: impl AsRef<Path>,
    emb: &EmbeddingStore,
    dims: &AtomDims,
    k0: usize,
) -> Result<Lexicon, LexiconError> {
    let path = path.as_ref();
    let text = crate::embeddings::read(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_lexicon(&text, &base, emb, dims, k0)
}

pub fn parse_lexicon(
    text: &str,
    base_dir: &Path,
    emb: &EmbeddingStore,
    dims: &AtomDims,
    k0: usize,
) -> Result<Lexicon, LexiconError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        let [word, formula, spec] = cols[..] else {
            return Err(LexiconError::Malformed {
                line,
                msg: format!("expected 3 tab-separated columns, found {}", cols.len()),
            });
        };
        let formula = parse_formula(formula).map_err(|source| LexiconError::Formula { line, source })?;
        let ctx = Ctx {
            line,
            word,
            base_dir,
            emb,
            dims,
            k0,
        };
        let value = ctx.value(&formula, spec)?;
        let entry = LexiconEntry::new(word, formula, value, dims, k0).map_err(|e| ctx.sem(e))?;
        entries.push(entry);
    }
    Ok(Lexicon { entries })
}

struct Ctx<'a> {
    line: usize,
    word: &'a str,
    base_dir: &'a Path,
    emb: &'a EmbeddingStore,
    dims: &'a AtomDims,
    k0: usize,
}

impl Ctx<'_> {
    fn sem(&self, source: SemanticsError) -> LexiconError {
        LexiconError::Semantics {
            line: self.line,
            word: self.word.to_string(),
            source,
        }
    }

    fn spec_err(&self, msg: impl Into<String>) -> LexiconError {
        LexiconError::Spec {
            line: self.line,
            word: self.word.to_string(),
            msg: msg.into(),
        }
    }

    fn emb_err(&self, source: EmbeddingError) -> LexiconError {
        LexiconError::Embedding {
            line: self.line,
            word: self.word.to_string(),
            source,
        }
    }

    fn path(&self, rel: &str) -> PathBuf {
        self.base_dir.join(rel)
    }

    fn value(&self, formula: &Formula, spec: &str) -> Result<TensorValue, LexiconError> {
        let shape = shape_of(formula, self.dims, self.k0).map_err(|e| self.sem(e))?;
        let (kind, arg) = match spec.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (spec, None),
        };
        match (kind, arg) {
            ("embed", None) => {
                let SpaceShape::Base(d) = shape else {
                    return Err(self.spec_err(format!("`embed` needs an atomic space, found {shape}")));
                };
                let mut v = self.emb.lookup(self.word).map_err(|e| self.emb_err(e))?;
                v.resize(d, 0.0);
                Ok(TensorValue::vector(v))
            }
            ("tilde", inner_spec) => {
                let inner = match formula {
                    Formula::Bang(a) => a,
                    _ => return Err(self.spec_err("`tilde` needs a formula of the form !A")),
                };
                // ∇ is transparent, so `!∇n` takes the vector of `n`.
                let v = self.value(inner, inner_spec.unwrap_or("embed"))?;
                Ok(fock_embed_tilde(&v, self.k0))
            }
            ("relational", Some(file)) => {
                let occs = load_occurrences(self.path(file)).map_err(|e| self.emb_err(e))?;
                let verb = self.word.to_lowercase();
                let mine: Vec<_> = occs.into_iter().filter(|o| o.verb == verb).collect();
                let m = relational_verb(&mine, self.emb, false).map_err(|e| self.emb_err(e))?;
                self.relational_shape(&m, &shape, formula)
            }
            ("file", Some(file)) => {
                let path = self.path(file);
                let text = crate::embeddings::read(&path).map_err(|e| self.emb_err(e))?;
                TensorValue::from_text(&text).map_err(|e| self.sem(e))
            }
            ("identity", None) => match &shape {
                SpaceShape::Tensor(fs) if fs.len() == 2 && fs[0] == SpaceShape::dual(fs[1].clone()) => {
                    let d = fs[1].total_dim();
                    let mut data = vec![0.0; d * d];
                    (0..d).for_each(|i| data[i * d + i] = 1.0);
                    Ok(TensorValue { shape, data })
                }
                _ => Err(self.spec_err(format!("`identity` needs a space A*⊗A, found {shape}"))),
            },
            _ => Err(self.spec_err(format!("unknown value spec `{spec}`"))),
        }
    }

    /// Places a `D × D` relational matrix `M[sub][obj]` into a verb's space.
    ///
    /// For `(n\s)/n` (object first) the cube is `T[o][sub][k] = M[sub][o]·δ(sub,k)`,
    /// and for `n\(s/n)` it is `T[sub][o][k]` with the same entries; either way
    /// applying it to an object and a subject gives `(M·obj) ⊙ subj`. Any other
    /// two-factor space `a ⊗ b` takes the top-left `a × b` block directly.
    fn relational_shape(
        &self,
        m: &TensorValue,
        shape: &SpaceShape,
        formula: &Formula,
    ) -> Result<TensorValue, LexiconError> {
        let big = self.emb.dim();
        let at = |i: usize, j: usize| if i < big && j < big { m.data[i * big + j] } else { 0.0 };
        let SpaceShape::Tensor(fs) = shape else {
            return Err(self.spec_err(format!("`relational` needs a verb space, found {shape}")));
        };
        let nested = match fs.get(1) {
            Some(SpaceShape::Tensor(inner)) if inner.len() == 2 => Some(inner),
            _ => None,
        };
        match (fs.len(), nested) {
            (2, Some(inner)) => {
                let (d1, d2, ds) = (fs[0].total_dim(), inner[0].total_dim(), inner[1].total_dim());
                if d1 != d2 || d2 != ds {
                    return Err(self.spec_err(format!(
                        "relational verbs need equal argument and sentence dims, found {shape}"
                    )));
                }
                let d = d1;
                let obj_first = obj_first(formula);
                let mut data = vec![0.0; d * d * d];
                for a in 0..d {
                    for b in 0..d {
                        let (sub, o) = if obj_first { (b, a) } else { (a, b) };
                        data[(a * d + b) * d + sub] = at(sub, o);
                    }
                }
                Ok(TensorValue {
                    shape: shape.clone(),
                    data,
                })
            }
            (2, None) => {
                let (a, b) = (fs[0].total_dim(), fs[1].total_dim());
                let data = (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).map(|(i, j)| at(i, j)).collect();
                Ok(TensorValue {
                    shape: shape.clone(),
                    data,
                })
            }
            _ => Err(self.spec_err(format!("`relational` needs a verb space, found {shape}"))),
        }
    }
}

/// `B/A` takes its argument first in the stored layout; `A\B` also does, but
/// for a transitive verb that argument is the subject.
fn obj_first(f: &Formula) -> bool {
    match f {
        Formula::Nabla(a) => obj_first(a),
        f => matches!(f, Formula::RightDiv(..)),
    }
}
