//! Sequents up to perm/perm′.
//!
//! A single perm or perm′ moves a ∇-rooted formula across any contiguous
//! block, so two sequents with the same non-∇ formulas in the same order, the
//! same multiset of ∇ formulas and the same goal prove each other. Search works
//! on these classes; every remaining rule strictly shrinks the multiset of
//! formulas (under the subformula order), so the class graph is acyclic.

use super::arena::{Arena, FId, Node};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct ClassKey {
    /// Non-∇ antecedent formulas, in order.
    pub fixed: Vec<FId>,
    /// ∇-rooted antecedent formulas, sorted.
    pub nablas: Vec<FId>,
    pub goal: FId,
    /// Set right after ∇L: the exposed formula `fixed[i]` must be principal next.
    pub focus: Option<usize>,
}

/// A rule applied to a class. Indices refer to `fixed`; `slot` counts the
/// fixed formulas to the left of an insertion point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Alt {
    Axiom,
    ProdL { i: usize },
    NablaL { f: FId, slot: usize },
    LeftDivR,
    RightDivR,
    ProdR { k: usize, m1: Vec<FId> },
    /// Γ is `fixed[j..i]` plus `m1`.
    LeftDivL { i: usize, j: usize, m1: Vec<FId> },
    /// Γ is `fixed[i+1..j]` plus `m1`.
    RightDivL { i: usize, j: usize, m1: Vec<FId> },
    BangL { i: usize, n: usize },
    BangR,
    NablaR,
}

pub(crate) struct Branch {
    pub alt: Alt,
    pub premises: Vec<ClassKey>,
}

impl ClassKey {
    pub fn new(arena: &Arena, items: impl IntoIterator<Item = FId>, goal: FId) -> Self {
        let mut fixed = Vec::new();
        let mut nablas = Vec::new();
        for id in items {
            if arena.is_nabla(id) {
                nablas.push(id);
            } else {
                fixed.push(id);
            }
        }
        nablas.sort_unstable();
        ClassKey {
            fixed,
            nablas,
            goal,
            focus: None,
        }
    }

    pub fn len(&self) -> usize {
        self.fixed.len() + self.nablas.len()
    }

    pub fn balanced(&self, arena: &Arena) -> bool {
        arena.balanced(
            self.fixed.iter().chain(&self.nablas).copied(),
            self.goal,
        )
    }

    fn with(&self, fixed: Vec<FId>, extra: &[FId], nablas: &[FId], goal: FId, arena: &Arena) -> Self {
        let mut key = ClassKey {
            fixed: Vec::new(),
            nablas: nablas.to_vec(),
            goal,
            focus: None,
        };
        // `fixed` may contain freshly exposed ∇ formulas; route them to the multiset.
        for id in fixed.into_iter().chain(extra.iter().copied()) {
            if arena.is_nabla(id) {
                key.nablas.push(id);
            } else {
                key.fixed.push(id);
            }
        }
        key.nablas.sort_unstable();
        key
    }
}

/// Every (sub-multiset, complement) split of a sorted multiset.
pub(crate) fn splits(sorted: &[FId]) -> Vec<(Vec<FId>, Vec<FId>)> {
    let mut groups: Vec<(FId, usize)> = Vec::new();
    for &id in sorted {
        match groups.last_mut() {
            Some((g, c)) if *g == id => *c += 1,
            _ => groups.push((id, 1)),
        }
    }
    let mut out = vec![(Vec::new(), Vec::new())];
    for (id, count) in groups {
        let mut next = Vec::with_capacity(out.len() * (count + 1));
        for (taken, rest) in &out {
            for t in 0..=count {
                let mut a = taken.clone();
                let mut b = rest.clone();
                a.extend(std::iter::repeat_n(id, t));
                b.extend(std::iter::repeat_n(id, count - t));
                next.push((a, b));
            }
        }
        out = next;
    }
    out
}

fn remove_one(sorted: &[FId], id: FId) -> Vec<FId> {
    let mut v = sorted.to_vec();
    let at = v.iter().position(|&x| x == id).expect("member");
    v.remove(at);
    v
}

/// All rule applications to `key`, in agenda order, with their premise classes.
///
/// ∇L is focused: the formula it exposes must be principal in the next step.
/// Any other ∇L permutes upwards past the rules that ignore its formula, so
/// this loses no provable sequent and never lengthens a proof.
pub(crate) fn branches(key: &ClassKey, arena: &Arena, k0: usize) -> Vec<Branch> {
    let mut out = Vec::new();
    let fixed = &key.fixed;
    let goal = key.goal;
    let single = |id: FId| ClassKey {
        focus: key.focus,
        ..ClassKey::new(arena, [id], goal)
    };
    let splice = |lo: usize, hi: usize, mid: &[FId]| -> Vec<FId> {
        let mut v = fixed[..lo].to_vec();
        v.extend_from_slice(mid);
        v.extend_from_slice(&fixed[hi..]);
        v
    };

    if key.len() == 1 && single(goal) == *key {
        out.push(Branch {
            alt: Alt::Axiom,
            premises: vec![],
        });
    }

    for (i, &f) in fixed.iter().enumerate() {
        if let Node::Prod(a, b) = arena.node(f) {
            out.push(Branch {
                alt: Alt::ProdL { i },
                premises: vec![key.with(splice(i, i + 1, &[a, b]), &[], &key.nablas, goal, arena)],
            });
        }
    }

    let mut seen = None;
    for &f in &key.nablas {
        if seen == Some(f) {
            continue;
        }
        seen = Some(f);
        let Node::Nabla(a) = arena.node(f) else { unreachable!() };
        let rest = remove_one(&key.nablas, f);
        if arena.is_nabla(a) {
            out.push(Branch {
                alt: Alt::NablaL { f, slot: 0 },
                premises: vec![key.with(fixed.clone(), &[a], &rest, goal, arena)],
            });
        } else {
            for slot in 0..=fixed.len() {
                out.push(Branch {
                    alt: Alt::NablaL { f, slot },
                    premises: vec![ClassKey {
                        focus: Some(slot),
                        ..key.with(splice(slot, slot, &[a]), &[], &rest, goal, arena)
                    }],
                });
            }
        }
    }

    match arena.node(goal) {
        Node::LDiv(a, b) => out.push(Branch {
            alt: Alt::LeftDivR,
            premises: vec![key.with(splice(0, 0, &[a]), &[], &key.nablas, b, arena)],
        }),
        Node::RDiv(b, a) => out.push(Branch {
            alt: Alt::RightDivR,
            premises: vec![key.with(fixed.clone(), &[a], &key.nablas, b, arena)],
        }),
        _ => {}
    }

    if let Node::Prod(a, b) = arena.node(goal) {
        for k in 0..=fixed.len() {
            for (m1, rest) in splits(&key.nablas) {
                let left = key.with(fixed[..k].to_vec(), &[], &m1, a, arena);
                let right = key.with(fixed[k..].to_vec(), &[], &rest, b, arena);
                out.push(Branch {
                    alt: Alt::ProdR { k, m1 },
                    premises: vec![left, right],
                });
            }
        }
    }

    for (i, &f) in fixed.iter().enumerate() {
        if let Node::LDiv(a, b) = arena.node(f) {
            for j in 0..=i {
                for (m1, rest) in splits(&key.nablas) {
                    let gamma = key.with(fixed[j..i].to_vec(), &[], &m1, a, arena);
                    let main = key.with(splice(j, i + 1, &[b]), &[], &rest, goal, arena);
                    out.push(Branch {
                        alt: Alt::LeftDivL { i, j, m1 },
                        premises: vec![gamma, main],
                    });
                }
            }
        }
    }

    for (i, &f) in fixed.iter().enumerate() {
        if let Node::RDiv(b, a) = arena.node(f) {
            for j in i + 1..=fixed.len() {
                for (m1, rest) in splits(&key.nablas) {
                    let gamma = key.with(fixed[i + 1..j].to_vec(), &[], &m1, a, arena);
                    let main = key.with(splice(i, j, &[b]), &[], &rest, goal, arena);
                    out.push(Branch {
                        alt: Alt::RightDivL { i, j, m1 },
                        premises: vec![gamma, main],
                    });
                }
            }
        }
    }

    for (i, &f) in fixed.iter().enumerate() {
        if let Node::Bang(a) = arena.node(f) {
            for n in 1..=k0 {
                let copies = vec![a; n];
                out.push(Branch {
                    alt: Alt::BangL { i, n },
                    premises: vec![key.with(splice(i, i + 1, &copies), &[], &key.nablas, goal, arena)],
                });
            }
        }
    }

    if let ([f], [], Node::Bang(b)) = (fixed.as_slice(), key.nablas.as_slice(), arena.node(goal)) {
        if let Node::Bang(a) = arena.node(*f) {
            out.push(Branch {
                alt: Alt::BangR,
                premises: vec![ClassKey::new(arena, [a], b)],
            });
        }
    }

    if let ([], [f], Node::Nabla(b)) = (fixed.as_slice(), key.nablas.as_slice(), arena.node(goal)) {
        let Node::Nabla(a) = arena.node(*f) else { unreachable!() };
        out.push(Branch {
            alt: Alt::NablaR,
            premises: vec![ClassKey::new(arena, [a], b)],
        });
    }

    if let Some(p) = key.focus {
        out.retain(|b| match b.alt {
            Alt::Axiom | Alt::BangR => true,
            Alt::ProdL { i }
            | Alt::LeftDivL { i, .. }
            | Alt::RightDivL { i, .. }
            | Alt::BangL { i, .. } => i == p,
            _ => false,
        });
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_of_multiset() {
        let s = splits(&[1, 1, 2]);
        assert_eq!(s.len(), 6);
        assert!(s.contains(&(vec![1, 2], vec![1])));
        assert_eq!(splits(&[]), vec![(vec![], vec![])]);
    }
}
