//! Independent checker: every node must instantiate its rule schema exactly.

use std::fmt;

use thiserror::Error;

use crate::derivation::{Derivation, Rule};
use crate::formula::{CalculusConfig, Formula, Sequent};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    WrongPremiseCount { expected: usize, found: usize },
    IndexOutOfRange,
    WrongConnective,
    PremiseMismatch { premise: usize, expected: Sequent },
    MultiplicityExceedsBound { n: usize, k0: usize },
    ZeroMultiplicity,
    NotNabla,
    PermDirection,
    AxiomMismatch,
    AntecedentShape,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::WrongPremiseCount { expected, found } => {
                write!(f, "expected {expected} premises, found {found}")
            }
            Reason::IndexOutOfRange => f.write_str("position out of range"),
            Reason::WrongConnective => f.write_str("principal formula has the wrong connective"),
            Reason::PremiseMismatch { premise, expected } => {
                write!(f, "premise {premise} should be `{expected}`")
            }
            Reason::MultiplicityExceedsBound { n, k0 } => {
                write!(f, "multiplicity exceeds bound ({n} > {k0})")
            }
            Reason::ZeroMultiplicity => f.write_str("multiplicity must be at least 1"),
            Reason::NotNabla => f.write_str("permuted formula is not ∇-rooted"),
            Reason::PermDirection => f.write_str("permutation moves in the wrong direction"),
            Reason::AxiomMismatch => f.write_str("axiom needs exactly `A ⟶ A`"),
            Reason::AntecedentShape => f.write_str("rule needs a single matching antecedent formula"),
        }
    }
}

/// Where a check failed: the child indices from the root, and why.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid node at {path:?}: {reason}")]
pub struct CheckError {
    pub path: Vec<usize>,
    pub reason: Reason,
}

pub fn check_derivation(d: &Derivation, cfg: &CalculusConfig) -> Result<(), CheckError> {
    let mut path = Vec::new();
    check_node(d, cfg, &mut path)
}

pub fn is_valid(d: &Derivation, cfg: &CalculusConfig) -> bool {
    check_derivation(d, cfg).is_ok()
}

fn check_node(d: &Derivation, cfg: &CalculusConfig, path: &mut Vec<usize>) -> Result<(), CheckError> {
    let fail = |reason| CheckError {
        path: path.clone(),
        reason,
    };
    if d.premises.len() != d.rule.arity() {
        return Err(fail(Reason::WrongPremiseCount {
            expected: d.rule.arity(),
            found: d.premises.len(),
        }));
    }
    let expected = expected_premises(&d.conclusion, &d.rule, cfg.k0).map_err(fail)?;
    for (i, (want, got)) in expected.into_iter().zip(&d.premises).enumerate() {
        if got.conclusion != want {
            return Err(fail(Reason::PremiseMismatch {
                premise: i,
                expected: want,
            }));
        }
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_node(p, cfg, path)?;
        path.pop();
    }
    Ok(())
}

/// The premises a rule application must have, given its conclusion.
pub(crate) fn expected_premises(
    seq: &Sequent,
    rule: &Rule,
    k0: usize,
) -> Result<Vec<Sequent>, Reason> {
    let ant = &seq.antecedent;
    let goal = &seq.succedent;
    let at = |i: usize| ant.get(i).ok_or(Reason::IndexOutOfRange);
    let spliced = |lo: usize, hi: usize, mid: Vec<Formula>| {
        let mut v = ant[..lo].to_vec();
        v.extend(mid);
        v.extend_from_slice(&ant[hi..]);
        v
    };

    match *rule {
        Rule::Axiom => {
            if ant.len() == 1 && ant[0] == *goal {
                Ok(vec![])
            } else {
                Err(Reason::AxiomMismatch)
            }
        }
        Rule::LeftDivL { index, gamma } => {
            let Formula::LeftDiv(a, b) = at(index)? else {
                return Err(Reason::WrongConnective);
            };
            if gamma > index {
                return Err(Reason::IndexOutOfRange);
            }
            let lo = index - gamma;
            Ok(vec![
                Sequent::new(ant[lo..index].to_vec(), (**a).clone()),
                Sequent::new(spliced(lo, index + 1, vec![(**b).clone()]), goal.clone()),
            ])
        }
        Rule::RightDivL { index, gamma } => {
            let Formula::RightDiv(b, a) = at(index)? else {
                return Err(Reason::WrongConnective);
            };
            let hi = index + 1 + gamma;
            if hi > ant.len() {
                return Err(Reason::IndexOutOfRange);
            }
            Ok(vec![
                Sequent::new(ant[index + 1..hi].to_vec(), (**a).clone()),
                Sequent::new(spliced(index, hi, vec![(**b).clone()]), goal.clone()),
            ])
        }
        Rule::LeftDivR => {
            let Formula::LeftDiv(a, b) = goal else {
                return Err(Reason::WrongConnective);
            };
            let mut v = vec![(**a).clone()];
            v.extend_from_slice(ant);
            Ok(vec![Sequent::new(v, (**b).clone())])
        }
        Rule::RightDivR => {
            let Formula::RightDiv(b, a) = goal else {
                return Err(Reason::WrongConnective);
            };
            let mut v = ant.clone();
            v.push((**a).clone());
            Ok(vec![Sequent::new(v, (**b).clone())])
        }
        Rule::ProdL { index } => {
            let Formula::Product(a, b) = at(index)? else {
                return Err(Reason::WrongConnective);
            };
            Ok(vec![Sequent::new(
                spliced(index, index + 1, vec![(**a).clone(), (**b).clone()]),
                goal.clone(),
            )])
        }
        Rule::ProdR { split } => {
            let Formula::Product(a, b) = goal else {
                return Err(Reason::WrongConnective);
            };
            if split > ant.len() {
                return Err(Reason::IndexOutOfRange);
            }
            Ok(vec![
                Sequent::new(ant[..split].to_vec(), (**a).clone()),
                Sequent::new(ant[split..].to_vec(), (**b).clone()),
            ])
        }
        Rule::BangL { index, n } => {
            let Formula::Bang(a) = at(index)? else {
                return Err(Reason::WrongConnective);
            };
            if n == 0 {
                return Err(Reason::ZeroMultiplicity);
            }
            if n > k0 {
                return Err(Reason::MultiplicityExceedsBound { n, k0 });
            }
            Ok(vec![Sequent::new(
                spliced(index, index + 1, vec![(**a).clone(); n]),
                goal.clone(),
            )])
        }
        Rule::BangR => match (ant.as_slice(), goal) {
            ([Formula::Bang(a)], Formula::Bang(b)) => {
                Ok(vec![Sequent::new(vec![(**a).clone()], (**b).clone())])
            }
            _ => Err(Reason::AntecedentShape),
        },
        Rule::NablaL { index } => {
            let Formula::Nabla(a) = at(index)? else {
                return Err(Reason::WrongConnective);
            };
            Ok(vec![Sequent::new(
                spliced(index, index + 1, vec![(**a).clone()]),
                goal.clone(),
            )])
        }
        Rule::NablaR => match (ant.as_slice(), goal) {
            ([Formula::Nabla(a)], Formula::Nabla(b)) => {
                Ok(vec![Sequent::new(vec![(**a).clone()], (**b).clone())])
            }
            _ => Err(Reason::AntecedentShape),
        },
        Rule::Perm { from, to } | Rule::PermPrime { from, to } => {
            let forward = matches!(rule, Rule::Perm { .. });
            if to >= ant.len() {
                return Err(Reason::IndexOutOfRange);
            }
            if !at(from)?.is_nabla() {
                return Err(Reason::NotNabla);
            }
            if (forward && from > to) || (!forward && from < to) {
                return Err(Reason::PermDirection);
            }
            Ok(vec![Sequent::new(move_item(ant, from, to), goal.clone())])
        }
    }
}

pub(crate) fn move_item<T: Clone>(items: &[T], from: usize, to: usize) -> Vec<T> {
    let mut v = items.to_vec();
    let x = v.remove(from);
    v.insert(to, x);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_sequent;

    fn node(text: &str, rule: Rule, premises: Vec<Derivation>) -> Derivation {
        Derivation::new(parse_sequent(text).unwrap(), rule, premises)
    }

    fn ax(text: &str) -> Derivation {
        node(text, Rule::Axiom, vec![])
    }

    #[test]
    fn axiom_checks() {
        let cfg = CalculusConfig::default();
        assert!(is_valid(&ax("n -> n"), &cfg));
        assert!(is_valid(&ax("n\\s -> n\\s"), &cfg));
        let err = check_derivation(&ax("n -> s"), &cfg).unwrap_err();
        assert_eq!(err.reason, Reason::AxiomMismatch);
        assert!(err.path.is_empty());
    }

    #[test]
    fn forged_multiplicity_is_rejected() {
        let cfg = CalculusConfig::default();
        let d = node(
            "!n -> n.n.n",
            Rule::BangL { index: 0, n: 3 },
            vec![node(
                "n, n, n -> n.n.n",
                Rule::ProdR { split: 2 },
                vec![
                    node("n, n -> n.n", Rule::ProdR { split: 1 }, vec![ax("n -> n"), ax("n -> n")]),
                    ax("n -> n"),
                ],
            )],
        );
        let err = check_derivation(&d, &cfg).unwrap_err();
        assert_eq!(err.reason, Reason::MultiplicityExceedsBound { n: 3, k0: 2 });
        assert!(err.to_string().contains("multiplicity exceeds bound"));
        let roomy = CalculusConfig {
            k0: 3,
            ..CalculusConfig::default()
        };
        assert!(is_valid(&d, &roomy));
    }

    #[test]
    fn reports_path_of_bad_premise() {
        let cfg = CalculusConfig::default();
        let d = node(
            "n, n\\s -> s",
            Rule::LeftDivL { index: 1, gamma: 1 },
            vec![ax("n -> n"), node("s -> s", Rule::NablaR, vec![ax("s -> s")])],
        );
        let err = check_derivation(&d, &cfg).unwrap_err();
        assert_eq!(err.path, vec![1]);
        assert_eq!(err.reason, Reason::AntecedentShape);
    }

    #[test]
    fn perm_moves_only_nabla_formulas() {
        let cfg = CalculusConfig::default();
        let ok = node(
            "@n, n\\s -> s",
            Rule::Perm { from: 0, to: 1 },
            vec![node(
                "n\\s, @n -> s",
                Rule::PermPrime { from: 1, to: 0 },
                vec![node(
                    "@n, n\\s -> s",
                    Rule::NablaL { index: 0 },
                    vec![node(
                        "n, n\\s -> s",
                        Rule::LeftDivL { index: 1, gamma: 1 },
                        vec![ax("n -> n"), ax("s -> s")],
                    )],
                )],
            )],
        );
        assert!(is_valid(&ok, &cfg));
        let bad = node("n, n\\s -> s", Rule::Perm { from: 0, to: 1 }, vec![ax("n\\s, n -> s")]);
        assert_eq!(check_derivation(&bad, &cfg).unwrap_err().reason, Reason::NotNabla);
        let backwards = node("n\\s, @n -> s", Rule::Perm { from: 1, to: 0 }, vec![ax("@n, n\\s -> s")]);
        assert_eq!(
            check_derivation(&backwards, &cfg).unwrap_err().reason,
            Reason::PermDirection
        );
    }

    #[test]
    fn modal_right_rules_need_single_antecedent() {
        let cfg = CalculusConfig::default();
        assert!(is_valid(&node("!n -> !n", Rule::BangR, vec![ax("n -> n")]), &cfg));
        assert!(is_valid(&node("@n -> @n", Rule::NablaR, vec![ax("n -> n")]), &cfg));
        let two = node("@n, @n -> @n", Rule::NablaR, vec![ax("n -> n")]);
        assert_eq!(check_derivation(&two, &cfg).unwrap_err().reason, Reason::AntecedentShape);
        let plain = node("n -> !n", Rule::BangR, vec![ax("n -> n")]);
        assert!(!is_valid(&plain, &cfg));
    }

    #[test]
    fn wrong_premise_count() {
        let cfg = CalculusConfig::default();
        let d = node("n, n\\s -> s", Rule::LeftDivL { index: 1, gamma: 1 }, vec![ax("n -> n")]);
        assert_eq!(
            check_derivation(&d, &cfg).unwrap_err().reason,
            Reason::WrongPremiseCount {
                expected: 2,
                found: 1
            }
        );
    }
}
