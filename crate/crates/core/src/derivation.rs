//! Derivation trees and their s-expression text format.
//!
//! ```text
//! (ldiv-l 1 1 [n, n\s ⟶ s]
//!   (axiom [n ⟶ n])
//!   (axiom [s ⟶ s]))
//! ```
//!
//! Each node is `(rule args... [conclusion] premises...)`. Positions are
//! zero-based indices into the conclusion's antecedent.

use std::fmt;

use thiserror::Error;

use crate::formula::{parse_sequent, ParseError, Sequent};
use crate::sexpr::{self, Sexpr, SexprError};

/// A rule application together with the positions it acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Axiom,
    /// `A\B` sits at `index`; the argument block is the `gamma` formulas to its left.
    LeftDivL { index: usize, gamma: usize },
    LeftDivR,
    /// `B/A` sits at `index`; the argument block is the `gamma` formulas to its right.
    RightDivL { index: usize, gamma: usize },
    RightDivR,
    ProdL { index: usize },
    /// The first `split` antecedent formulas prove the left factor.
    ProdR { split: usize },
    BangL { index: usize, n: usize },
    BangR,
    NablaL { index: usize },
    NablaR,
    /// `∇A` at `from` in the conclusion moves right to `to` in the premise.
    Perm { from: usize, to: usize },
    /// `∇A` at `from` in the conclusion moves left to `to` in the premise.
    PermPrime { from: usize, to: usize },
}

/// Rule names without positional data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    Axiom,
    LeftDivL,
    LeftDivR,
    RightDivL,
    RightDivR,
    ProdL,
    ProdR,
    BangL(usize),
    BangR,
    NablaL,
    NablaR,
    Perm,
    PermPrime,
}

impl Rule {
    pub fn tag(&self) -> RuleTag {
        match *self {
            Rule::Axiom => RuleTag::Axiom,
            Rule::LeftDivL { .. } => RuleTag::LeftDivL,
            Rule::LeftDivR => RuleTag::LeftDivR,
            Rule::RightDivL { .. } => RuleTag::RightDivL,
            Rule::RightDivR => RuleTag::RightDivR,
            Rule::ProdL { .. } => RuleTag::ProdL,
            Rule::ProdR { .. } => RuleTag::ProdR,
            Rule::BangL { n, .. } => RuleTag::BangL(n),
            Rule::BangR => RuleTag::BangR,
            Rule::NablaL { .. } => RuleTag::NablaL,
            Rule::NablaR => RuleTag::NablaR,
            Rule::Perm { .. } => RuleTag::Perm,
            Rule::PermPrime { .. } => RuleTag::PermPrime,
        }
    }

    /// Number of premises the rule schema requires.
    pub fn arity(&self) -> usize {
        match self {
            Rule::Axiom => 0,
            Rule::LeftDivL { .. } | Rule::RightDivL { .. } | Rule::ProdR { .. } => 2,
            _ => 1,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Rule::Axiom => "axiom",
            Rule::LeftDivL { .. } => "ldiv-l",
            Rule::LeftDivR => "ldiv-r",
            Rule::RightDivL { .. } => "rdiv-l",
            Rule::RightDivR => "rdiv-r",
            Rule::ProdL { .. } => "prod-l",
            Rule::ProdR { .. } => "prod-r",
            Rule::BangL { .. } => "bang-l",
            Rule::BangR => "bang-r",
            Rule::NablaL { .. } => "nabla-l",
            Rule::NablaR => "nabla-r",
            Rule::Perm { .. } => "perm",
            Rule::PermPrime { .. } => "perm'",
        }
    }

    fn args(&self) -> Vec<usize> {
        match *self {
            Rule::LeftDivL { index, gamma } | Rule::RightDivL { index, gamma } => {
                vec![index, gamma]
            }
            Rule::ProdL { index } | Rule::NablaL { index } => vec![index],
            Rule::ProdR { split } => vec![split],
            Rule::BangL { index, n } => vec![index, n],
            Rule::Perm { from, to } | Rule::PermPrime { from, to } => vec![from, to],
            _ => vec![],
        }
    }

    fn from_parts(name: &str, args: &[usize]) -> Option<Rule> {
        let rule = match (name, args) {
            ("axiom", []) => Rule::Axiom,
            ("ldiv-l", [index, gamma]) => Rule::LeftDivL {
                index: *index,
                gamma: *gamma,
            },
            ("ldiv-r", []) => Rule::LeftDivR,
            ("rdiv-l", [index, gamma]) => Rule::RightDivL {
                index: *index,
                gamma: *gamma,
            },
            ("rdiv-r", []) => Rule::RightDivR,
            ("prod-l", [index]) => Rule::ProdL { index: *index },
            ("prod-r", [split]) => Rule::ProdR { split: *split },
            ("bang-l", [index, n]) => Rule::BangL {
                index: *index,
                n: *n,
            },
            ("bang-r", []) => Rule::BangR,
            ("nabla-l", [index]) => Rule::NablaL { index: *index },
            ("nabla-r", []) => Rule::NablaR,
            ("perm", [from, to]) => Rule::Perm {
                from: *from,
                to: *to,
            },
            ("perm'", [from, to]) => Rule::PermPrime {
                from: *from,
                to: *to,
            },
            _ => return None,
        };
        Some(rule)
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleTag::Axiom => f.write_str("I"),
            RuleTag::LeftDivL => f.write_str("\\L"),
            RuleTag::LeftDivR => f.write_str("\\R"),
            RuleTag::RightDivL => f.write_str("/L"),
            RuleTag::RightDivR => f.write_str("/R"),
            RuleTag::ProdL => f.write_str("·L"),
            RuleTag::ProdR => f.write_str("·R"),
            RuleTag::BangL(n) => write!(f, "!L({n})"),
            RuleTag::BangR => f.write_str("!R"),
            RuleTag::NablaL => f.write_str("∇L"),
            RuleTag::NablaR => f.write_str("∇R"),
            RuleTag::Perm => f.write_str("perm"),
            RuleTag::PermPrime => f.write_str("perm'"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub premises: Vec<Derivation>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DerivationParseError {
    #[error(transparent)]
    Syntax(#[from] SexprError),
    #[error("malformed node: {0}")]
    Malformed(String),
    #[error("bad sequent `{text}`: {source}")]
    Sequent { text: String, source: ParseError },
}

impl Derivation {
    pub fn new(conclusion: Sequent, rule: Rule, premises: Vec<Derivation>) -> Self {
        Derivation {
            conclusion,
            rule,
            premises,
        }
    }

    /// Number of rule nodes on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Pre-order walk over every node.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            out.push(d);
            stack.extend(d.premises.iter().rev());
        }
        out
    }

    pub fn rule_tags(&self) -> Vec<RuleTag> {
        self.nodes().into_iter().map(|d| d.rule.tag()).collect()
    }

    pub fn to_sexpr(&self) -> Sexpr {
        let mut items = vec![Sexpr::Symbol(self.rule.name().to_string())];
        items.extend(
            self.rule
                .args()
                .into_iter()
                .map(|a| Sexpr::Symbol(a.to_string())),
        );
        items.push(Sexpr::Text(self.conclusion.to_string()));
        items.extend(self.premises.iter().map(Derivation::to_sexpr));
        Sexpr::List(items)
    }

    /// Multi-line s-expression, one node per line.
    pub fn to_sexpr_pretty(&self) -> String {
        let mut out = String::new();
        self.write_sexpr(&mut out, 0);
        out
    }

    fn write_sexpr(&self, out: &mut String, indent: usize) {
        out.push_str(&"  ".repeat(indent));
        out.push('(');
        out.push_str(self.rule.name());
        for a in self.rule.args() {
            out.push(' ');
            out.push_str(&a.to_string());
        }
        out.push_str(&format!(" [{}]", self.conclusion));
        for p in &self.premises {
            out.push('\n');
            p.write_sexpr(out, indent + 1);
        }
        out.push(')');
    }

    pub fn from_sexpr(e: &Sexpr) -> Result<Derivation, DerivationParseError> {
        let malformed = |why: &str| DerivationParseError::Malformed(format!("{why} in {e}"));
        let items = e.as_list().ok_or_else(|| malformed("expected a list"))?;
        let name = items
            .first()
            .and_then(Sexpr::as_symbol)
            .ok_or_else(|| malformed("missing rule name"))?;
        let text_at = items
            .iter()
            .position(|it| matches!(it, Sexpr::Text(_)))
            .ok_or_else(|| malformed("missing conclusion"))?;
        let args = items[1..text_at]
            .iter()
            .map(|a| a.as_symbol().and_then(|s| s.parse::<usize>().ok()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| malformed("non-numeric rule argument"))?;
        let rule = Rule::from_parts(name, &args).ok_or_else(|| malformed("unknown rule"))?;
        let text = items[text_at].as_text().unwrap_or_default();
        let conclusion = parse_sequent(text).map_err(|source| DerivationParseError::Sequent {
            text: text.to_string(),
            source,
        })?;
        let premises = items[text_at + 1..]
            .iter()
            .map(Derivation::from_sexpr)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Derivation {
            conclusion,
            rule,
            premises,
        })
    }

    pub fn parse(text: &str) -> Result<Derivation, DerivationParseError> {
        Derivation::from_sexpr(&sexpr::parse(text)?)
    }

    /// Indented tree, conclusion first, rule label on the right.
    pub fn to_tree_string(&self) -> String {
        let mut out = String::new();
        self.write_tree(&mut out, 0);
        out
    }

    fn write_tree(&self, out: &mut String, indent: usize) {
        out.push_str(&"  ".repeat(indent));
        out.push_str(&format!("{}    [{}]\n", self.conclusion, self.rule.tag()));
        for p in &self.premises {
            p.write_tree(out, indent + 1);
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexpr())
    }
}
