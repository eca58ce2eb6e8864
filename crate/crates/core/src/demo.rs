//! Worked examples: parasitic gaps, anaphora, ellipsis, and the strict and
//! sloppy readings of an anaphor inside an elided verb phrase.
//!
//! Each example has a fixed sequent, a seeded random lexicon of the right
//! shapes, and an oracle that computes the intended meaning by contracting the
//! word tensors directly. Where a sentence has several readings the oracle
//! picks one, and [`run_demo`] searches the enumerated derivations for the
//! one that denotes it.
//!
//! Copies made by `!` are unordered, so wherever a lexicon value's second
//! Fock layer is consumed by two different positions the random value is
//! symmetrised in that layer; this makes the meaning independent of which
//! copy the prover sends where.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::compile::compile_derivation;
use crate::derivation::Derivation;
use crate::formula::{parse_formula, CalculusConfig, Formula, Sequent};
use crate::lexicon::LexiconEntry;
use crate::search::{enumerate_proofs_with, search, SearchError, SearchOutcome};
use crate::tensor::{approx_eq_slices, fock_embed_tilde, kron, shape_of, AtomDims, SemanticsError, SpaceShape, TensorValue};

/// How many derivations to compile when looking for a particular reading.
pub const READING_SEARCH_LIMIT: usize = 5000;

#[derive(Debug, Error)]
pub enum DemoError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("`{0}` has no derivation within the depth bound")]
    Unprovable(String),
    #[error("none of {examined} derivations denotes the {example} reading")]
    NoMatchingReading { example: DemoExample, examined: usize },
    #[error("unknown example `{0}`")]
    UnknownExample(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DemoExample {
    ParasiticGap,
    Anaphora,
    Ellipsis,
    AnaphoraEllipsisStrict,
    AnaphoraEllipsisSloppy,
}

impl DemoExample {
    pub const ALL: [DemoExample; 5] = [
        DemoExample::ParasiticGap,
        DemoExample::Anaphora,
        DemoExample::Ellipsis,
        DemoExample::AnaphoraEllipsisStrict,
        DemoExample::AnaphoraEllipsisSloppy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DemoExample::ParasiticGap => "parasitic-gap",
            DemoExample::Anaphora => "anaphora",
            DemoExample::Ellipsis => "ellipsis",
            DemoExample::AnaphoraEllipsisStrict => "anaphora-ellipsis-strict",
            DemoExample::AnaphoraEllipsisSloppy => "anaphora-ellipsis-sloppy",
        }
    }

    pub fn sentence(self) -> &'static str {
        match self {
            DemoExample::ParasiticGap => "papers that John signed without reading",
            DemoExample::Anaphora => "John sleeps. He snores",
            DemoExample::Ellipsis => "John plays guitar. Lisa does too",
            DemoExample::AnaphoraEllipsisStrict | DemoExample::AnaphoraEllipsisSloppy => {
                "Kim likes their code. Sam does too"
            }
        }
    }

    /// `(word, formula)` pairs in sentence order, and the goal.
    pub fn words(self) -> (Vec<(&'static str, &'static str)>, &'static str) {
        match self {
            DemoExample::ParasiticGap => (
                vec![
                    ("papers", "n"),
                    ("that", "(n\\n)/(s/!@n)"),
                    ("john", "n"),
                    ("signed", "n\\s/n"),
                    ("without", "((n\\s)\\(n\\s))/n"),
                    ("reading", "n/n"),
                ],
                "n",
            ),
            DemoExample::Anaphora => (
                vec![
                    ("john", "!(@n)"),
                    ("sleeps", "n\\s"),
                    ("he", "@n\\n"),
                    ("snores", "n\\s"),
                ],
                "s.s",
            ),
            DemoExample::Ellipsis => (
                vec![
                    ("john", "n"),
                    ("plays-guitar", "!(@(n\\s))"),
                    ("lisa", "n"),
                    ("does-too", "@(n\\s)\\(n\\s)"),
                ],
                "s.s",
            ),
            DemoExample::AnaphoraEllipsisStrict | DemoExample::AnaphoraEllipsisSloppy => (
                vec![
                    ("kim", "!(@n)"),
                    ("likes", "!(@(!(@(n\\s))/n))"),
                    ("their", "!(@(@n\\n))/n"),
                    ("code", "n"),
                    ("sam", "!(@n)"),
                    ("does-too", "@(n\\s)\\(n\\s)"),
                ],
                "s.s",
            ),
        }
    }

    /// How many copies the reading makes of each copyable phrase, as
    /// `(formula, copies)`. Formulas not listed are unconstrained.
    ///
    /// Strict: the verb phrase `likes their code` is built once, with Kim as
    /// the owner, and copied. Sloppy: `likes` and `their` are each copied, so
    /// each clause builds its own verb phrase around its own subject.
    pub fn copies(self) -> &'static [(&'static str, usize)] {
        match self {
            DemoExample::AnaphoraEllipsisStrict => {
                &[("!(@(!(@(n\\s))/n))", 1), ("!(@(@n\\n))", 1), ("!(@(n\\s))", 2)]
            }
            DemoExample::AnaphoraEllipsisSloppy => {
                &[("!(@(!(@(n\\s))/n))", 2), ("!(@(@n\\n))", 2), ("!(@(n\\s))", 1), ("!(@n)", 2)]
            }
            _ => &[],
        }
    }

    /// Whether `!L` may split `f` into `n` copies under this reading.
    pub fn allows_copies(self, f: &Formula, n: usize) -> bool {
        self.copies()
            .iter()
            .all(|(text, k)| parse_formula(text).map_or(true, |g| g != *f || n == *k))
    }

    pub fn sequent(self) -> Sequent {
        let (words, goal) = self.words();
        let ant = words
            .iter()
            .map(|(_, f)| parse_formula(f).expect("demo formulas parse"))
            .collect();
        Sequent::new(ant, parse_formula(goal).expect("demo goal parses"))
    }
}

impl fmt::Display for DemoExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DemoExample {
    type Err = DemoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DemoExample::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| DemoError::UnknownExample(s.to_string()))
    }
}

fn random(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Averages the `m × m` block at `offset` with its transpose.
fn symmetrize_block(data: &mut [f64], offset: usize, m: usize) {
    for a in 0..m {
        for b in a + 1..m {
            let (i, j) = (offset + a * m + b, offset + b * m + a);
            let avg = (data[i] + data[j]) / 2.0;
            data[i] = avg;
            data[j] = avg;
        }
    }
}

/// Symmetrises layer 2 of every `fock_len`-long Fock element stored row by row.
fn symmetrize_fock_rows(data: &mut [f64], inner: usize) {
    let fock_len = 1 + inner + inner * inner;
    for row in data.chunks_mut(fock_len) {
        symmetrize_block(row, 1 + inner, inner);
    }
}

/// A random lexicon for `example`, reproducible from `seed`.
pub fn demo_lexicon(
    example: DemoExample,
    dims: &AtomDims,
    k0: usize,
    seed: u64,
) -> Result<Vec<LexiconEntry>, DemoError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (dn, ds) = (dims.get("n")?, dims.get("s")?);
    let (words, _) = example.words();
    let mut out = Vec::new();
    for (word, text) in words {
        let formula = parse_formula(text).expect("demo formulas parse");
        let shape = shape_of(&formula, dims, k0)?;
        let value = match (word, &formula) {
            // Proper names under `!` are copyable vectors.
            (_, Formula::Bang(inner)) if word != "likes" && word != "plays-guitar" => {
                let v = TensorValue::new(shape_of(inner, dims, k0)?, random(&mut rng, dn))?;
                fock_embed_tilde(&v, k0)
            }
            ("plays-guitar", Formula::Bang(inner)) => {
                let inner_shape = shape_of(inner, dims, k0)?;
                let v = TensorValue::new(inner_shape.clone(), random(&mut rng, inner_shape.total_dim()))?;
                fock_embed_tilde(&v, k0)
            }
            ("likes", Formula::Bang(inner)) => {
                let inner_shape = shape_of(inner, dims, k0)?;
                let mut data = random(&mut rng, inner_shape.total_dim());
                if k0 >= 2 {
                    symmetrize_fock_rows(&mut data, dn * ds);
                }
                fock_embed_tilde(&TensorValue::new(inner_shape, data)?, k0)
            }
            ("their", _) => {
                let mut data = random(&mut rng, shape.total_dim());
                if k0 >= 2 {
                    symmetrize_fock_rows(&mut data, dn * dn);
                }
                TensorValue::new(shape.clone(), data)?
            }
            ("that", _) => {
                let mut data = random(&mut rng, shape.total_dim());
                if k0 >= 2 {
                    // Rows are indexed by (G, t) with G in the Fock space of n.
                    let fock = SpaceShape::fock(SpaceShape::Base(dn), k0).total_dim();
                    let row = dn * dn;
                    for t in 0..ds {
                        for a in 0..dn {
                            for b in a + 1..dn {
                                let ga = 1 + dn + a * dn + b;
                                let gb = 1 + dn + b * dn + a;
                                for k in 0..row {
                                    let i = (ga * ds + t) * row + k;
                                    let j = (gb * ds + t) * row + k;
                                    let avg = (data[i] + data[j]) / 2.0;
                                    data[i] = avg;
                                    data[j] = avg;
                                }
                            }
                        }
                    }
                    debug_assert_eq!(data.len(), fock * ds * row);
                }
                TensorValue::new(shape.clone(), data)?
            }
            _ => TensorValue::new(shape.clone(), random(&mut rng, shape.total_dim()))?,
        };
        out.push(LexiconEntry::new(word, formula, value, dims, k0)?);
    }
    Ok(out)
}

fn value<'a>(lex: &'a [LexiconEntry], word: &str) -> &'a [f64] {
    &lex.iter().find(|e| e.word == word).expect("demo word present").value.data
}

/// The intended meaning, computed by direct contraction of the word tensors.
///
/// Oracles read layers 1 and 2 only, so they need `k0 ≥ 2`.
pub fn demo_oracle(example: DemoExample, lex: &[LexiconEntry], dims: &AtomDims) -> Result<TensorValue, DemoError> {
    let (dn, ds) = (dims.get("n")?, dims.get("s")?);
    let ss = SpaceShape::Tensor(vec![SpaceShape::Base(ds), SpaceShape::Base(ds)]);
    // x · M for a row-major `rows × cols` matrix.
    let apply = |x: &[f64], m: &[f64], cols: usize| -> Vec<f64> {
        (0..cols).map(|c| x.iter().enumerate().map(|(r, xr)| xr * m[r * cols + c]).sum()).collect()
    };
    let layer1 = |fock: &[f64], d: usize| fock[1..1 + d].to_vec();
    let data = match example {
        DemoExample::Anaphora => {
            let j = layer1(value(lex, "john"), dn);
            let v1 = apply(&j, value(lex, "sleeps"), ds);
            let he = apply(&j, value(lex, "he"), dn);
            let v2 = apply(&he, value(lex, "snores"), ds);
            kron(&v1, &v2)
        }
        DemoExample::Ellipsis => {
            let v = dn * ds;
            let p = layer1(value(lex, "plays-guitar"), v);
            let v1 = apply(value(lex, "john"), &p, ds);
            let q = apply(&p, value(lex, "does-too"), v);
            let v2 = apply(value(lex, "lisa"), &q, ds);
            kron(&v1, &v2)
        }
        DemoExample::ParasiticGap => {
            let (papers, john) = (value(lex, "papers"), value(lex, "john"));
            let (that, signed) = (value(lex, "that"), value(lex, "signed"));
            let (without, reading) = (value(lex, "without"), value(lex, "reading"));
            let v = dn * ds;
            let fock = 1 + dn + dn * dn;
            // Λ[G][u]: the relative clause as a function of its gap.
            let mut lam = vec![0.0; fock * ds];
            for g1 in 0..dn {
                for g2 in 0..dn {
                    let r = &reading[g2 * dn..(g2 + 1) * dn];
                    let w = apply(r, without, v * v);
                    let vp = &signed[g1 * v..(g1 + 1) * v];
                    let vp2 = apply(vp, &w, v);
                    let s = apply(john, &vp2, ds);
                    let g = 1 + dn + g1 * dn + g2;
                    lam[g * ds..(g + 1) * ds].copy_from_slice(&s);
                }
            }
            let rel = apply(&lam, that, dn * dn);
            apply(papers, &rel, dn)
        }
        DemoExample::AnaphoraEllipsisStrict | DemoExample::AnaphoraEllipsisSloppy => {
            let v = dn * ds;
            let h = dn * dn;
            let (kim, sam) = (layer1(value(lex, "kim"), dn), layer1(value(lex, "sam"), dn));
            let likes = value(lex, "likes");
            let fv = 1 + v + v * v;
            let ell = &likes[1..1 + dn * fv];
            let their = value(lex, "their");
            let code = value(lex, "code");
            let dt = value(lex, "does-too");
            let tc = apply(code, their, 1 + h + h * h);
            // Subject `x` applied to a verb phrase; `does too` with `y`.
            let first = |vp: &[f64], x: &[f64]| apply(x, vp, ds);
            let second = |vp: &[f64], y: &[f64]| apply(y, &apply(vp, dt, v), ds);
            let mut out = vec![0.0; ds * ds];
            if example == DemoExample::AnaphoraEllipsisStrict {
                let owner = apply(&kim, &tc[1..1 + h], dn);
                let lw = apply(&owner, ell, fv);
                let pair = &lw[1 + v..];
                for v1 in 0..v {
                    for v2 in 0..v {
                        let c = pair[v1 * v + v2];
                        let e1: Vec<f64> = (0..v).map(|k| f64::from(u8::from(k == v1))).collect();
                        let e2: Vec<f64> = (0..v).map(|k| f64::from(u8::from(k == v2))).collect();
                        let a = first(&e1, &kim);
                        let b = second(&e2, &sam);
                        for (o, x) in out.iter_mut().zip(kron(&a, &b)) {
                            *o += c * x;
                        }
                    }
                }
            } else {
                let theta = &tc[1 + h..];
                let vp_of = |owner: &[f64]| apply(owner, ell, fv)[1..1 + v].to_vec();
                for h1 in 0..h {
                    for h2 in 0..h {
                        let c = theta[h1 * h + h2];
                        // h = (i, o): the owner map sends e_i to e_o.
                        let own = |hh: usize, x: &[f64]| {
                            let mut w = vec![0.0; dn];
                            w[hh % dn] = x[hh / dn];
                            w
                        };
                        let a = first(&vp_of(&own(h1, &kim)), &kim);
                        let b = second(&vp_of(&own(h2, &sam)), &sam);
                        for (o, x) in out.iter_mut().zip(kron(&a, &b)) {
                            *o += c * x;
                        }
                    }
                }
            }
            out
        }
    };
    let shape = if example == DemoExample::ParasiticGap {
        SpaceShape::Base(dn)
    } else {
        ss
    };
    Ok(TensorValue::new(shape, data)?)
}

#[derive(Clone, Debug)]
pub struct DemoRun {
    pub example: DemoExample,
    pub sequent: Sequent,
    pub derivation: Derivation,
    pub lexicon: Vec<LexiconEntry>,
    pub output: TensorValue,
    pub oracle: TensorValue,
    /// Derivations compiled before one matched the oracle.
    pub examined: usize,
}

impl DemoRun {
    pub fn matches(&self) -> bool {
        approx_eq_slices(&self.output.data, &self.oracle.data)
    }
}

/// Runs `derivation`'s map on the lexicon values.
pub fn evaluate(
    derivation: &Derivation,
    lex: &[LexiconEntry],
    dims: &AtomDims,
    cfg: &CalculusConfig,
) -> Result<TensorValue, DemoError> {
    let map = compile_derivation(derivation, dims, cfg)?;
    let inputs: Vec<TensorValue> = lex.iter().map(|e| e.value.clone()).collect();
    Ok(map.apply_factors(&inputs)?)
}

/// Proves the example's sequent and evaluates it on a seeded lexicon.
///
/// The shallowest derivation is tried first; if it denotes a different
/// reading, up to [`READING_SEARCH_LIMIT`] enumerated derivations are tried.
pub fn run_demo(example: DemoExample, dims: &AtomDims, cfg: &CalculusConfig, seed: u64) -> Result<DemoRun, DemoError> {
    let sequent = example.sequent();
    let lexicon = demo_lexicon(example, dims, cfg.k0, seed)?;
    let oracle = demo_oracle(example, &lexicon, dims)?;
    let first = match search(&sequent, cfg)? {
        SearchOutcome::Proved(d) => d,
        _ => return Err(DemoError::Unprovable(sequent.to_string())),
    };
    let mut examined = 0;
    let mut candidates = vec![first];
    let mut enumerated = false;
    while let Some(d) = candidates.pop() {
        examined += 1;
        let output = evaluate(&d, &lexicon, dims, cfg)?;
        if approx_eq_slices(&output.data, &oracle.data) {
            return Ok(DemoRun {
                example,
                sequent,
                derivation: d,
                lexicon,
                output,
                oracle,
                examined,
            });
        }
        if !enumerated {
            enumerated = true;
            let allow = |f: &Formula, n: usize| example.allows_copies(f, n);
            candidates = enumerate_proofs_with(&sequent, cfg, READING_SEARCH_LIMIT, &allow)?;
            candidates.reverse();
        }
    }
    Err(DemoError::NoMatchingReading { example, examined })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims() -> AtomDims {
        "n=2,s=2".parse().unwrap()
    }

    #[test]
    fn names_round_trip() {
        for e in DemoExample::ALL {
            assert_eq!(e.name().parse::<DemoExample>().unwrap(), e);
        }
        assert!("nope".parse::<DemoExample>().is_err());
    }

    #[test]
    fn lexicons_fit_their_formulas() {
        for e in DemoExample::ALL {
            let lex = demo_lexicon(e, &dims(), 2, 1).unwrap();
            assert_eq!(lex.len(), e.sequent().antecedent.len());
        }
    }

    #[test]
    fn simple_examples_match_their_oracles() {
        let cfg = CalculusConfig::default();
        for e in [DemoExample::Anaphora, DemoExample::Ellipsis, DemoExample::ParasiticGap] {
            let run = run_demo(e, &dims(), &cfg, 3).unwrap();
            assert!(run.matches(), "{e}");
            assert_eq!(run.examined, 1, "{e}");
        }
    }
}

#[cfg(test)]
mod reading_tests {
    use super::*;

    #[test]
    fn strict_and_sloppy_are_both_derivable_and_differ() {
        let cfg = CalculusConfig::default();
        let dims: AtomDims = "n=2,s=2".parse().unwrap();
        let strict = run_demo(DemoExample::AnaphoraEllipsisStrict, &dims, &cfg, 5).unwrap();
        let sloppy = run_demo(DemoExample::AnaphoraEllipsisSloppy, &dims, &cfg, 5).unwrap();
        assert_ne!(strict.derivation, sloppy.derivation);
        assert!(!approx_eq_slices(&strict.output.data, &sloppy.output.data));
        eprintln!("examined {} / {}", strict.examined, sloppy.examined);
    }
}
