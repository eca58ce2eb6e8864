//! Formulas and sequents of the calculus, with a small concrete syntax.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! over   := under ( '/' under )*        left-associative
//! under  := prod ( '\' under )?         right-associative
//! prod   := prefix ( '·' prefix )*      left-associative
//! prefix := '!' prefix | '∇' prefix | atom | '(' over ')'
//! ```
//!
//! `\` binds tighter than `/`, so `n\s/n` reads as `(n\s)/n`. ASCII aliases:
//! `.` for `·`, `@` for `∇`, `->` for `⟶`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A formula. `LeftDiv(a, b)` is `a\b`; `RightDiv(b, a)` is `b/a`. Both keep
/// their operands in textual order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Product(Box<Formula>, Box<Formula>),
    LeftDiv(Box<Formula>, Box<Formula>),
    RightDiv(Box<Formula>, Box<Formula>),
    Bang(Box<Formula>),
    Nabla(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn product(left: Formula, right: Formula) -> Self {
        Formula::Product(Box::new(left), Box::new(right))
    }

    /// `arg\result`
    pub fn left_div(arg: Formula, result: Formula) -> Self {
        Formula::LeftDiv(Box::new(arg), Box::new(result))
    }

    /// `result/arg`
    pub fn right_div(result: Formula, arg: Formula) -> Self {
        Formula::RightDiv(Box::new(result), Box::new(arg))
    }

    pub fn bang(inner: Formula) -> Self {
        Formula::Bang(Box::new(inner))
    }

    pub fn nabla(inner: Formula) -> Self {
        Formula::Nabla(Box::new(inner))
    }

    /// True when the main connective is `∇`, i.e. the formula may be permuted.
    pub fn is_nabla(&self) -> bool {
        matches!(self, Formula::Nabla(_))
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Product(a, b) | Formula::LeftDiv(a, b) | Formula::RightDiv(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Bang(a) | Formula::Nabla(a) => 1 + a.depth(),
        }
    }

    /// Every atom name occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.as_str());
            }
            Formula::Product(a, b) | Formula::LeftDiv(a, b) | Formula::RightDiv(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Bang(a) | Formula::Nabla(a) => a.collect_atoms(out),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Formula::RightDiv(..) => 1,
            Formula::LeftDiv(..) => 2,
            Formula::Product(..) => 3,
            Formula::Atom(_) | Formula::Bang(_) | Formula::Nabla(_) => 4,
        }
    }

    fn write_with(&self, out: &mut String, sym: &Symbols) {
        match self {
            Formula::Atom(name) => out.push_str(name),
            Formula::Bang(a) => {
                out.push('!');
                a.write_at(out, 4, sym);
            }
            Formula::Nabla(a) => {
                out.push_str(sym.nabla);
                a.write_at(out, 4, sym);
            }
            Formula::Product(a, b) => {
                a.write_at(out, 3, sym);
                out.push_str(sym.product);
                b.write_at(out, 4, sym);
            }
            Formula::LeftDiv(a, b) => {
                a.write_at(out, 3, sym);
                out.push('\\');
                b.write_at(out, 2, sym);
            }
            Formula::RightDiv(b, a) => {
                b.write_at(out, 1, sym);
                out.push('/');
                a.write_at(out, 2, sym);
            }
        }
    }

    fn write_at(&self, out: &mut String, min_level: u8, sym: &Symbols) {
        if self.level() >= min_level {
            self.write_with(out, sym);
        } else {
            out.push('(');
            self.write_with(out, sym);
            out.push(')');
        }
    }

    /// Minimal-parenthesis rendering using only ASCII symbols.
    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        self.write_with(&mut out, &ASCII);
        out
    }
}

struct Symbols {
    nabla: &'static str,
    product: &'static str,
    arrow: &'static str,
}

const UNICODE: Symbols = Symbols {
    nabla: "∇",
    product: "·",
    arrow: "⟶",
};

const ASCII: Symbols = Symbols {
    nabla: "@",
    product: ".",
    arrow: "->",
};

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write_with(&mut out, &UNICODE);
        f.write_str(&out)
    }
}

/// Renders a formula with the fewest parentheses that still reparse to it.
pub fn format_formula(f: &Formula) -> String {
    f.to_string()
}

/// `antecedent ⟶ succedent`; the antecedent order is significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Formula,
}

impl Sequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Formula) -> Self {
        Sequent {
            antecedent,
            succedent,
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = self.succedent.atoms();
        for f in &self.antecedent {
            out.extend(f.atoms());
        }
        out
    }

    pub fn to_ascii(&self) -> String {
        self.render(&ASCII)
    }

    fn render(&self, sym: &Symbols) -> String {
        let mut out = String::new();
        for (i, f) in self.antecedent.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            f.write_with(&mut out, sym);
        }
        if !self.antecedent.is_empty() {
            out.push(' ');
        }
        out.push_str(sym.arrow);
        out.push(' ');
        self.succedent.write_with(&mut out, sym);
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&UNICODE))
    }
}

/// Global settings shared by search and semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalculusConfig {
    /// Upper bound on the multiplicity of a single multiplexing step.
    pub k0: usize,
    /// Cap on search depth, counted in logical rule steps.
    pub max_depth: usize,
    pub atom_alphabet: BTreeSet<String>,
}

impl Default for CalculusConfig {
    fn default() -> Self {
        CalculusConfig {
            k0: 2,
            max_depth: 40,
            atom_alphabet: ["n", "s"].iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("k0 must be at least 1")]
    ZeroBound,
    #[error("max_depth must be at least 1")]
    ZeroDepth,
    #[error("atom `{0}` is not in the declared alphabet")]
    UnknownAtom(String),
}

impl CalculusConfig {
    pub fn new(k0: usize, max_depth: usize) -> Result<Self, ConfigError> {
        let cfg = CalculusConfig {
            k0,
            max_depth,
            ..CalculusConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_atoms<I, S>(mut self, atoms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.atom_alphabet.extend(atoms.into_iter().map(Into::into));
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.k0 == 0 {
            return Err(ConfigError::ZeroBound);
        }
        if self.max_depth == 0 {
            return Err(ConfigError::ZeroDepth);
        }
        Ok(())
    }

    /// Rejects sequents mentioning atoms outside the alphabet.
    pub fn check_atoms(&self, seq: &Sequent) -> Result<(), ConfigError> {
        match seq
            .atoms()
            .into_iter()
            .find(|a| !self.atom_alphabet.contains(*a))
        {
            Some(a) => Err(ConfigError::UnknownAtom(a.to_string())),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at column {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("expected {expected} at column {pos}, found {found}")]
    Unexpected {
        expected: &'static str,
        found: String,
        pos: usize,
    },
    #[error("unknown atom `{name}` at column {pos}")]
    UnknownAtom { name: String, pos: usize },
    #[error("missing `⟶` (or `->`) in sequent")]
    MissingArrow,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Bang,
    Nabla,
    Dot,
    Under,
    Over,
    LParen,
    RParen,
    Comma,
    Arrow,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("atom `{s}`"),
            Tok::Bang => "`!`".into(),
            Tok::Nabla => "`∇`".into(),
            Tok::Dot => "`·`".into(),
            Tok::Under => "`\\`".into(),
            Tok::Over => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`⟶`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '!' => out.push((Tok::Bang, pos)),
            '∇' | '@' => out.push((Tok::Nabla, pos)),
            '·' | '.' | '⋅' => out.push((Tok::Dot, pos)),
            '\\' => out.push((Tok::Under, pos)),
            '/' => out.push((Tok::Over, pos)),
            '(' => out.push((Tok::LParen, pos)),
            ')' => out.push((Tok::RParen, pos)),
            ',' => out.push((Tok::Comma, pos)),
            '⟶' | '→' => out.push((Tok::Arrow, pos)),
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, pos));
                i += 2;
                continue;
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
                continue;
            }
            ch => return Err(ParseError::UnexpectedChar { ch, pos }),
        }
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    alphabet: Option<&'a BTreeSet<String>>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError::Unexpected {
            expected,
            found: self.peek().describe(),
            pos: self.pos(),
        }
    }

    fn over(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.under()?;
        while *self.peek() == Tok::Over {
            self.bump();
            let rhs = self.under()?;
            acc = Formula::right_div(acc, rhs);
        }
        Ok(acc)
    }

    fn under(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.prod()?;
        if *self.peek() == Tok::Under {
            self.bump();
            let rhs = self.under()?;
            return Ok(Formula::left_div(lhs, rhs));
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.prefix()?;
        while *self.peek() == Tok::Dot {
            self.bump();
            let rhs = self.prefix()?;
            acc = Formula::product(acc, rhs);
        }
        Ok(acc)
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::bang(self.prefix()?))
            }
            Tok::Nabla => {
                self.bump();
                Ok(Formula::nabla(self.prefix()?))
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(alpha) = self.alphabet {
                    if !alpha.contains(&name) {
                        return Err(ParseError::UnknownAtom { name, pos });
                    }
                }
                Ok(Formula::Atom(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.over()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

fn parser<'a>(
    text: &'a str,
    alphabet: Option<&'a BTreeSet<String>>,
) -> Result<Parser<'a>, ParseError> {
    Ok(Parser {
        toks: lex(text)?,
        at: 0,
        alphabet,
    })
}

/// Parses a formula, accepting any atom name.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_in(text, None)
}

/// Parses a formula; with `Some(alphabet)`, atoms outside it are rejected.
pub fn parse_formula_in(
    text: &str,
    alphabet: Option<&BTreeSet<String>>,
) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        alphabet,
    };
    let f = p.over()?;
    p.expect_end()?;
    Ok(f)
}

/// Parses `f1, f2, ... ⟶ g` (or `->`); the antecedent may be empty.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    parse_sequent_in(text, None)
}

pub fn parse_sequent_in(
    text: &str,
    alphabet: Option<&BTreeSet<String>>,
) -> Result<Sequent, ParseError> {
    let mut p = parser(text, alphabet)?;
    if !p.toks.iter().any(|(t, _)| *t == Tok::Arrow) {
        return Err(ParseError::MissingArrow);
    }
    let mut antecedent = Vec::new();
    if *p.peek() != Tok::Arrow {
        loop {
            antecedent.push(p.over()?);
            match p.peek() {
                Tok::Comma => {
                    p.bump();
                }
                Tok::Arrow => break,
                _ => return Err(p.unexpected("`,` or `⟶`")),
            }
        }
    }
    p.bump();
    let succedent = p.over()?;
    p.expect_end()?;
    Ok(Sequent {
        antecedent,
        succedent,
    })
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl std::str::FromStr for Sequent {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sequent(s)
    }
}
