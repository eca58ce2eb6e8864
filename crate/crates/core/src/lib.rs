//! Lambek calculus with soft subexponentials: formulas, proof search, and a
//! vector-space semantics built on truncated Fock spaces, plus the sentence
//! similarity pipeline that evaluates it.

pub mod check;
pub mod compile;
pub mod demo;
pub mod derivation;
pub mod embeddings;
pub mod experiments;
pub mod formula;
pub mod lexicon;
pub mod search;
pub mod sexpr;
pub mod tensor;

pub use check::{check_derivation, is_valid, CheckError, Reason};
pub use derivation::{Derivation, DerivationParseError, Rule, RuleTag};
pub use formula::{
    format_formula, parse_formula, parse_formula_in, parse_sequent, parse_sequent_in,
    CalculusConfig, ConfigError, Formula, ParseError, Sequent,
};
pub use search::{enumerate_proofs, enumerate_proofs_with, is_provable, prove, search, SearchError, SearchOutcome};
pub use compile::compile_derivation;
pub use embeddings::{
    load_occurrences, relational_verb, EmbeddingError, EmbeddingFormat, EmbeddingStore, SvoOccurrence,
    UnknownWordPolicy,
};
pub use lexicon::{build_lexicon, parse_lexicon, Lexicon, LexiconEntry, LexiconError};
