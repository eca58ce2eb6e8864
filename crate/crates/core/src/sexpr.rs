//! Minimal s-expression reader shared by the derivation and tensor text formats.
//!
//! Three kinds of leaves: bare symbols, `[bracketed text]` kept verbatim (used
//! for sequents, which contain parentheses), and nested lists.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum Sexpr {
    Symbol(String),
    Text(String),
    List(Vec<Sexpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SexprError {
    #[error("unexpected end of input")]
    Eof,
    #[error("unbalanced `{0}` at offset {1}")]
    Unbalanced(char, usize),
    #[error("trailing input at offset {0}")]
    Trailing(usize),
}

impl Sexpr {
    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Sexpr::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Sexpr::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(items) => Some(items),
            _ => None,
        }
    }
}

impl fmt::Display for Sexpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexpr::Symbol(s) => f.write_str(s),
            Sexpr::Text(s) => write!(f, "[{s}]"),
            Sexpr::List(items) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn parse(text: &str) -> Result<Sexpr, SexprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut at = 0;
    let value = read(&chars, &mut at)?;
    skip_ws(&chars, &mut at);
    if at < chars.len() {
        return Err(SexprError::Trailing(at));
    }
    Ok(value)
}

fn skip_ws(chars: &[char], at: &mut usize) {
    while *at < chars.len() && chars[*at].is_whitespace() {
        *at += 1;
    }
}

fn read(chars: &[char], at: &mut usize) -> Result<Sexpr, SexprError> {
    skip_ws(chars, at);
    let Some(&c) = chars.get(*at) else {
        return Err(SexprError::Eof);
    };
    match c {
        '(' => {
            *at += 1;
            let mut items = Vec::new();
            loop {
                skip_ws(chars, at);
                match chars.get(*at) {
                    None => return Err(SexprError::Eof),
                    Some(')') => {
                        *at += 1;
                        return Ok(Sexpr::List(items));
                    }
                    Some(_) => items.push(read(chars, at)?),
                }
            }
        }
        ')' | ']' => Err(SexprError::Unbalanced(c, *at)),
        '[' => {
            let start = *at;
            *at += 1;
            let body_start = *at;
            while *at < chars.len() && chars[*at] != ']' {
                if chars[*at] == '[' {
                    return Err(SexprError::Unbalanced('[', *at));
                }
                *at += 1;
            }
            if *at >= chars.len() {
                return Err(SexprError::Unbalanced('[', start));
            }
            let body: String = chars[body_start..*at].iter().collect();
            *at += 1;
            Ok(Sexpr::Text(body.trim().to_string()))
        }
        _ => {
            let start = *at;
            while *at < chars.len() && !chars[*at].is_whitespace() && !"()[]".contains(chars[*at])
            {
                *at += 1;
            }
            Ok(Sexpr::Symbol(chars[start..*at].iter().collect()))
        }
    }
}
