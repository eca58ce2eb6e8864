//! Hash-consed formulas plus the atom-count intervals used for pruning.

use std::collections::HashMap;

use crate::formula::{Formula, Sequent};

pub(crate) type FId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Node {
    Atom,
    Prod(FId, FId),
    /// `arg \ result`
    LDiv(FId, FId),
    /// `result / arg`
    RDiv(FId, FId),
    Bang(FId),
    Nabla(FId),
}

/// Interval of the signed atom count a formula can contribute, one per atom.
type Counts = Vec<(i64, i64)>;

pub(crate) struct Arena {
    nodes: Vec<Node>,
    formulas: Vec<Formula>,
    index: HashMap<Formula, FId>,
    atoms: Vec<String>,
    /// `[negative, positive]` polarity intervals.
    counts: Vec<[Counts; 2]>,
    k0: i64,
}

impl Arena {
    /// Interns every subformula of `seq`. Search never builds new formulas.
    pub fn for_sequent(seq: &Sequent, k0: usize) -> Self {
        let atoms = seq.atoms().into_iter().map(str::to_string).collect();
        let mut arena = Arena {
            nodes: Vec::new(),
            formulas: Vec::new(),
            index: HashMap::new(),
            atoms,
            counts: Vec::new(),
            k0: k0 as i64,
        };
        for f in seq.antecedent.iter().chain([&seq.succedent]) {
            arena.intern(f);
        }
        arena
    }

    fn intern(&mut self, f: &Formula) -> FId {
        if let Some(&id) = self.index.get(f) {
            return id;
        }
        let node = match f {
            Formula::Atom(_) => Node::Atom,
            Formula::Product(a, b) => Node::Prod(self.intern(a), self.intern(b)),
            Formula::LeftDiv(a, b) => Node::LDiv(self.intern(a), self.intern(b)),
            Formula::RightDiv(b, a) => Node::RDiv(self.intern(b), self.intern(a)),
            Formula::Bang(a) => Node::Bang(self.intern(a)),
            Formula::Nabla(a) => Node::Nabla(self.intern(a)),
        };
        let counts = self.counts_of(f, node);
        let id = self.nodes.len() as FId;
        self.nodes.push(node);
        self.formulas.push(f.clone());
        self.counts.push(counts);
        self.index.insert(f.clone(), id);
        id
    }

    fn counts_of(&self, f: &Formula, node: Node) -> [Counts; 2] {
        let zero = vec![(0, 0); self.atoms.len()];
        let add = |x: &Counts, y: &Counts| -> Counts {
            x.iter().zip(y).map(|(a, b)| (a.0 + b.0, a.1 + b.1)).collect()
        };
        let c = |id: FId, pol: usize| &self.counts[id as usize][pol];
        match node {
            Node::Atom => {
                let Formula::Atom(name) = f else { unreachable!() };
                let k = self.atoms.iter().position(|a| a == name).expect("atom collected");
                let mut neg = zero.clone();
                let mut pos = zero;
                neg[k] = (-1, -1);
                pos[k] = (1, 1);
                [neg, pos]
            }
            Node::Prod(a, b) => [add(c(a, 0), c(b, 0)), add(c(a, 1), c(b, 1))],
            Node::LDiv(arg, res) | Node::RDiv(res, arg) => {
                [add(c(arg, 1), c(res, 0)), add(c(arg, 0), c(res, 1))]
            }
            Node::Nabla(a) => [c(a, 0).clone(), c(a, 1).clone()],
            Node::Bang(a) => {
                // A negative `!A` may become anywhere from 1 to k0 copies.
                let neg = c(a, 0)
                    .iter()
                    .map(|&(lo, hi)| (lo.min(self.k0 * lo), hi.max(self.k0 * hi)))
                    .collect();
                [neg, c(a, 1).clone()]
            }
        }
    }

    pub fn id(&self, f: &Formula) -> FId {
        self.index[f]
    }

    pub fn formula(&self, id: FId) -> &Formula {
        &self.formulas[id as usize]
    }

    pub fn node(&self, id: FId) -> Node {
        self.nodes[id as usize]
    }

    pub fn is_nabla(&self, id: FId) -> bool {
        matches!(self.node(id), Node::Nabla(_))
    }

    /// Necessary condition for provability: every atom's signed count can be zero.
    pub fn balanced(&self, ant: impl Iterator<Item = FId>, goal: FId) -> bool {
        let mut total = self.counts[goal as usize][1].clone();
        for id in ant {
            for (t, c) in total.iter_mut().zip(&self.counts[id as usize][0]) {
                t.0 += c.0;
                t.1 += c.1;
            }
        }
        total.iter().all(|&(lo, hi)| lo <= 0 && 0 <= hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_sequent;

    fn balanced(text: &str) -> bool {
        let seq = parse_sequent(text).unwrap();
        let arena = Arena::for_sequent(&seq, 2);
        let ant: Vec<FId> = seq.antecedent.iter().map(|f| arena.id(f)).collect();
        arena.balanced(ant.into_iter(), arena.id(&seq.succedent))
    }

    #[test]
    fn counts_prune_obvious_failures() {
        assert!(balanced("n, n\\s -> s"));
        assert!(!balanced("n -> s"));
        assert!(!balanced("n, n -> n"));
        assert!(balanced("!n -> n.n"));
        assert!(!balanced("!n -> n.n.n"));
        assert!(balanced("@n -> @n"));
    }

    #[test]
    fn interning_shares_subformulas() {
        let seq = parse_sequent("n\\s, n\\s -> n\\s").unwrap();
        let arena = Arena::for_sequent(&seq, 2);
        assert_eq!(arena.nodes.len(), 3);
    }
}
