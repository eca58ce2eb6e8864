//! Dimension signatures of interpreted formulas.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::SemanticsError;
use crate::formula::Formula;
use crate::sexpr::{self, Sexpr};

/// Vector-space shape mirroring a formula. Data is row-major over
/// `Tensor` factors; a `Fock` space stores its layers `V^⊗0 .. V^⊗k0`
/// one after another.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceShape {
    /// The scalars, interpreting the empty context.
    Unit,
    Base(usize),
    Dual(Box<SpaceShape>),
    Tensor(Vec<SpaceShape>),
    Fock { inner: Box<SpaceShape>, k0: usize },
}

impl SpaceShape {
    pub fn dual(s: SpaceShape) -> Self {
        SpaceShape::Dual(Box::new(s))
    }

    pub fn fock(inner: SpaceShape, k0: usize) -> Self {
        SpaceShape::Fock {
            inner: Box::new(inner),
            k0,
        }
    }

    /// The shape of a context: scalars when empty, the formula itself when single.
    pub fn context(mut factors: Vec<SpaceShape>) -> Self {
        match factors.len() {
            0 => SpaceShape::Unit,
            1 => factors.pop().unwrap(),
            _ => SpaceShape::Tensor(factors),
        }
    }

    /// `V^⊗n` with the same conventions as [`SpaceShape::context`].
    pub fn power(&self, n: usize) -> Self {
        SpaceShape::context(vec![self.clone(); n])
    }

    pub fn total_dim(&self) -> usize {
        match self {
            SpaceShape::Unit => 1,
            SpaceShape::Base(d) => *d,
            SpaceShape::Dual(s) => s.total_dim(),
            SpaceShape::Tensor(fs) => fs.iter().map(SpaceShape::total_dim).product(),
            SpaceShape::Fock { inner, k0 } => {
                let d = inner.total_dim();
                (0..=*k0).map(|i| d.pow(i as u32)).sum()
            }
        }
    }

    /// Offset and length of layer `n` inside a Fock space of inner dimension `d`.
    pub fn layer_range(d: usize, n: usize) -> (usize, usize) {
        let offset = (0..n).map(|i| d.pow(i as u32)).sum();
        (offset, d.pow(n as u32))
    }

    /// Top-level factors (a non-tensor shape is its own single factor).
    pub fn factors(&self) -> Vec<SpaceShape> {
        match self {
            SpaceShape::Tensor(fs) => fs.clone(),
            SpaceShape::Unit => Vec::new(),
            other => vec![other.clone()],
        }
    }

    pub fn to_sexpr(&self) -> Sexpr {
        let list = |head: &str, rest: Vec<Sexpr>| {
            let mut v = vec![Sexpr::Symbol(head.to_string())];
            v.extend(rest);
            Sexpr::List(v)
        };
        match self {
            SpaceShape::Unit => list("unit", vec![]),
            SpaceShape::Base(d) => Sexpr::Symbol(d.to_string()),
            SpaceShape::Dual(s) => list("dual", vec![s.to_sexpr()]),
            SpaceShape::Tensor(fs) => list("tensor", fs.iter().map(SpaceShape::to_sexpr).collect()),
            SpaceShape::Fock { inner, k0 } => {
                list("fock", vec![inner.to_sexpr(), Sexpr::Symbol(k0.to_string())])
            }
        }
    }

    pub fn from_sexpr(e: &Sexpr) -> Result<Self, SemanticsError> {
        let bad = || SemanticsError::Format(format!("bad shape `{e}`"));
        let positive = |s: &Sexpr| -> Result<usize, SemanticsError> {
            s.as_symbol()
                .and_then(|t| t.parse::<usize>().ok())
                .filter(|&d| d > 0)
                .ok_or_else(bad)
        };
        if e.as_symbol().is_some() {
            return Ok(SpaceShape::Base(positive(e)?));
        }
        let items = e.as_list().ok_or_else(bad)?;
        let (head, rest) = items.split_first().ok_or_else(bad)?;
        match (head.as_symbol(), rest) {
            (Some("unit"), []) => Ok(SpaceShape::Unit),
            (Some("dual"), [s]) => Ok(SpaceShape::dual(SpaceShape::from_sexpr(s)?)),
            (Some("tensor"), fs) if fs.len() >= 2 => Ok(SpaceShape::Tensor(
                fs.iter().map(SpaceShape::from_sexpr).collect::<Result<_, _>>()?,
            )),
            (Some("fock"), [s, k]) => Ok(SpaceShape::fock(SpaceShape::from_sexpr(s)?, positive(k)?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SpaceShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexpr())
    }
}

impl FromStr for SpaceShape {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let e = sexpr::parse(s).map_err(|e| SemanticsError::Format(e.to_string()))?;
        SpaceShape::from_sexpr(&e)
    }
}

/// Dimension of each atom's vector space.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AtomDims(pub BTreeMap<String, usize>);

impl AtomDims {
    pub fn new<I, S>(pairs: I) -> Result<Self, SemanticsError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (name, d) in pairs {
            let name = name.into();
            if d == 0 {
                return Err(SemanticsError::ZeroDim(name));
            }
            map.insert(name, d);
        }
        Ok(AtomDims(map))
    }

    pub fn get(&self, atom: &str) -> Result<usize, SemanticsError> {
        self.0
            .get(atom)
            .copied()
            .ok_or_else(|| SemanticsError::MissingAtom(atom.to_string()))
    }
}

/// Parses `n=2,s=3`.
impl FromStr for AtomDims {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut pairs = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, d) = part
                .split_once('=')
                .ok_or_else(|| SemanticsError::Format(format!("expected atom=dim, got `{part}`")))?;
            let d = d
                .trim()
                .parse()
                .map_err(|_| SemanticsError::Format(format!("bad dimension in `{part}`")))?;
            pairs.push((name.trim().to_string(), d));
        }
        AtomDims::new(pairs)
    }
}

impl fmt::Display for AtomDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn shape_of(f: &Formula, dims: &AtomDims, k0: usize) -> Result<SpaceShape, SemanticsError> {
    let go = |g: &Formula| shape_of(g, dims, k0);
    Ok(match f {
        Formula::Atom(a) => SpaceShape::Base(dims.get(a)?),
        Formula::Product(a, b) => SpaceShape::Tensor(vec![go(a)?, go(b)?]),
        Formula::LeftDiv(a, b) | Formula::RightDiv(b, a) => {
            SpaceShape::Tensor(vec![SpaceShape::dual(go(a)?), go(b)?])
        }
        Formula::Bang(a) => SpaceShape::fock(go(a)?, k0),
        Formula::Nabla(a) => go(a)?,
    })
}

/// Shape of an antecedent, one factor per formula.
pub fn context_shape(fs: &[Formula], dims: &AtomDims, k0: usize) -> Result<SpaceShape, SemanticsError> {
    Ok(SpaceShape::context(
        fs.iter().map(|f| shape_of(f, dims, k0)).collect::<Result<_, _>>()?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, parse_sequent};

    fn dims() -> AtomDims {
        "n=2,s=3".parse().unwrap()
    }

    #[test]
    fn division_is_dual_first() {
        let s = shape_of(&parse_formula("n\\s").unwrap(), &dims(), 2).unwrap();
        assert_eq!(s, SpaceShape::Tensor(vec![SpaceShape::dual(SpaceShape::Base(2)), SpaceShape::Base(3)]));
        assert_eq!(s.total_dim(), 6);
        let r = shape_of(&parse_formula("s/n").unwrap(), &dims(), 2).unwrap();
        assert_eq!(r, s);
    }

    #[test]
    fn fock_dimension_is_geometric() {
        let s = shape_of(&parse_formula("!@n").unwrap(), &dims(), 2).unwrap();
        assert_eq!(s, SpaceShape::fock(SpaceShape::Base(2), 2));
        assert_eq!(s.total_dim(), 7);
        assert_eq!(SpaceShape::layer_range(2, 2), (3, 4));
    }

    #[test]
    fn anaphora_context() {
        let seq = parse_sequent("!(@n), n\\s, @n\\n, n\\s -> s.s").unwrap();
        let d: AtomDims = "n=2,s=2".parse().unwrap();
        let s = context_shape(&seq.antecedent, &d, 2).unwrap();
        let fs = s.factors();
        assert_eq!(fs.len(), 4);
        assert_eq!(fs[0].total_dim(), 7);
        assert!(fs[1..].iter().all(|f| f.total_dim() == 4));
        assert_eq!(context_shape(&[], &d, 2).unwrap(), SpaceShape::Unit);
    }

    #[test]
    fn text_round_trip() {
        for text in ["2", "(unit)", "(dual 3)", "(tensor (dual 2) 3)", "(fock (tensor 2 2) 3)"] {
            let s: SpaceShape = text.parse().unwrap();
            assert_eq!(s.to_string(), text);
        }
        assert!("(fock 2)".parse::<SpaceShape>().is_err());
        assert!("0".parse::<SpaceShape>().is_err());
    }

    #[test]
    fn missing_atom() {
        let d: AtomDims = "n=2".parse().unwrap();
        assert!(matches!(
            shape_of(&parse_formula("n\\s").unwrap(), &d, 2),
            Err(SemanticsError::MissingAtom(a)) if a == "s"
        ));
        assert!("n=0".parse::<AtomDims>().is_err());
    }
}
