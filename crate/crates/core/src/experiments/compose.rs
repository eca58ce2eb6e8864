//! Sentence vectors for `Subject Verb Object and Subject* does too`.
//!
//! Verb matrices are `D × D` with `M[sub][obj]`, as built by the relational
//! method. The structural models treat `does too` as copying the verb phrase,
//! so the sentence is `base(Subject) + base(Subject*)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::dataset::Half;
use super::ExperimentError;
use crate::embeddings::EmbeddingStore;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    CopySubj,
    CopyObj,
    FrobAdd,
    FrobMult,
    VerbOnlyVector,
    VerbOnlyTensor,
    Additive,
    ExternalSentenceVectors,
}

impl ModelId {
    pub const ALL: [ModelId; 8] = [
        ModelId::CopySubj,
        ModelId::CopyObj,
        ModelId::FrobAdd,
        ModelId::FrobMult,
        ModelId::VerbOnlyVector,
        ModelId::VerbOnlyTensor,
        ModelId::Additive,
        ModelId::ExternalSentenceVectors,
    ];

    /// The models that need only word vectors and verb matrices.
    pub const WORD_BASED: [ModelId; 7] = [
        ModelId::CopySubj,
        ModelId::CopyObj,
        ModelId::FrobAdd,
        ModelId::FrobMult,
        ModelId::VerbOnlyVector,
        ModelId::VerbOnlyTensor,
        ModelId::Additive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::CopySubj => "copy-subj",
            ModelId::CopyObj => "copy-obj",
            ModelId::FrobAdd => "frob-add",
            ModelId::FrobMult => "frob-mult",
            ModelId::VerbOnlyVector => "verb-only-vector",
            ModelId::VerbOnlyTensor => "verb-only-tensor",
            ModelId::Additive => "additive",
            ModelId::ExternalSentenceVectors => "external",
        }
    }

    /// Row label for report tables.
    pub fn title(self) -> &'static str {
        match self {
            ModelId::CopySubj => "Copy Subject",
            ModelId::CopyObj => "Copy Object",
            ModelId::FrobAdd => "Frobenius Add.",
            ModelId::FrobMult => "Frobenius Mult.",
            ModelId::VerbOnlyVector => "Verb Only Vector",
            ModelId::VerbOnlyTensor => "Verb Only Tensor",
            ModelId::Additive => "Additive",
            ModelId::ExternalSentenceVectors => "Sentence Vectors",
        }
    }

    pub fn needs_verbs(self) -> bool {
        matches!(
            self,
            ModelId::CopySubj | ModelId::CopyObj | ModelId::FrobAdd | ModelId::FrobMult | ModelId::VerbOnlyTensor
        )
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ExperimentError::Config(format!("unknown model `{s}`")))
    }
}

/// Word vectors, relational verb matrices and optional precomputed sentence
/// vectors for one embedding space.
#[derive(Clone, Debug)]
pub struct Resources {
    pub words: EmbeddingStore,
    /// Row-major `D × D` matrices keyed by lowercase verb.
    pub verbs: HashMap<String, Vec<f64>>,
    /// Keyed by the sentence's canonical text (see [`Half`]'s `Display`).
    pub sentences: Option<EmbeddingStore>,
}

impl Resources {
    fn word(&self, w: &str) -> Result<Vec<f64>, ExperimentError> {
        Ok(self.words.lookup(w)?)
    }

    fn verb(&self, v: &str) -> Result<&[f64], ExperimentError> {
        self.verbs
            .get(v)
            .map(Vec::as_slice)
            .ok_or_else(|| ExperimentError::MissingVerb(v.to_string()))
    }
}

/// `M · x`: contracts the object index.
fn mat_vec(m: &[f64], x: &[f64]) -> Vec<f64> {
    let d = x.len();
    (0..d).map(|i| (0..d).map(|j| m[i * d + j] * x[j]).sum()).collect()
}

/// `Mᵀ · x`: contracts the subject index.
fn mat_t_vec(m: &[f64], x: &[f64]) -> Vec<f64> {
    let d = x.len();
    (0..d).map(|j| (0..d).map(|i| m[i * d + j] * x[i]).sum()).collect()
}

fn hadamard(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

fn sum(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `(Verb × Object) ⊙ subject`.
pub fn copy_obj(verb: &[f64], object: &[f64], subject: &[f64]) -> Vec<f64> {
    hadamard(&mat_vec(verb, object), subject)
}

/// `(Verb × subject) ⊙ Object`.
pub fn copy_subj(verb: &[f64], object: &[f64], subject: &[f64]) -> Vec<f64> {
    hadamard(&mat_t_vec(verb, subject), object)
}

pub fn compose_sentence(model: ModelId, half: &Half, res: &Resources) -> Result<Vec<f64>, ExperimentError> {
    match model {
        ModelId::VerbOnlyVector => res.word(&half.verb),
        ModelId::VerbOnlyTensor => Ok(res.verb(&half.verb)?.to_vec()),
        ModelId::Additive => {
            let mut v = res.word(&half.subject)?;
            for w in [&half.verb, &half.object, &half.subject_star] {
                v = sum(&v, &res.word(w)?);
            }
            Ok(v)
        }
        ModelId::ExternalSentenceVectors => {
            let store = res
                .sentences
                .as_ref()
                .ok_or_else(|| ExperimentError::Config("no sentence vectors loaded".into()))?;
            Ok(store.lookup(&half.to_string())?)
        }
        ModelId::CopySubj | ModelId::CopyObj | ModelId::FrobAdd | ModelId::FrobMult => {
            let m = res.verb(&half.verb)?;
            let o = res.word(&half.object)?;
            let base = |s: &[f64]| match model {
                ModelId::CopyObj => copy_obj(m, &o, s),
                ModelId::CopySubj => copy_subj(m, &o, s),
                ModelId::FrobAdd => sum(&copy_obj(m, &o, s), &copy_subj(m, &o, s)),
                _ => hadamard(&copy_obj(m, &o, s), &copy_subj(m, &o, s)),
            };
            let s = res.word(&half.subject)?;
            let s_star = res.word(&half.subject_star)?;
            Ok(sum(&base(&s), &base(&s_star)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(words: &[(&str, Vec<f64>)], verbs: &[(&str, Vec<f64>)]) -> Resources {
        Resources {
            words: EmbeddingStore::from_pairs(words.iter().cloned()).unwrap(),
            verbs: verbs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            sentences: None,
        }
    }

    #[test]
    fn copy_obj_multiplex_by_hand() {
        let r = res(
            &[("s", vec![1.0, 1.0]), ("o", vec![1.0, 0.0]), ("t", vec![0.0, 1.0])],
            &[("v", vec![1.0, 0.0, 0.0, 1.0])],
        );
        let h = Half::new("s", "v", "o", "t");
        assert_eq!(compose_sentence(ModelId::CopyObj, &h, &r).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn additive_with_zero_subject_star() {
        let r = res(
            &[("s", vec![1.0, 2.0]), ("v", vec![3.0, 0.0]), ("o", vec![0.5, 0.5]), ("z", vec![0.0, 0.0])],
            &[],
        );
        let h = Half::new("s", "v", "o", "z");
        assert_eq!(compose_sentence(ModelId::Additive, &h, &r).unwrap(), vec![4.5, 2.5]);
    }

    #[test]
    fn frob_mult_of_symmetric_verb_squares_copy_obj() {
        let x = vec![0.3, -1.2];
        let r = res(&[("x", x.clone()), ("z", vec![0.0, 0.0])], &[("v", vec![2.0, 1.0, 1.0, 3.0])]);
        let h = Half::new("x", "v", "x", "z");
        let co = copy_obj(&r.verbs["v"], &x, &x);
        let want: Vec<f64> = co.iter().map(|c| c * c).collect();
        let got = compose_sentence(ModelId::FrobMult, &h, &r).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_verb_is_reported() {
        let r = res(&[("s", vec![1.0])], &[]);
        let h = Half::new("s", "v", "s", "s");
        assert!(matches!(
            compose_sentence(ModelId::CopyObj, &h, &r),
            Err(ExperimentError::MissingVerb(_))
        ));
        assert!("bogus".parse::<ModelId>().is_err());
        assert_eq!("frob-add".parse::<ModelId>().unwrap(), ModelId::FrobAdd);
    }
}
