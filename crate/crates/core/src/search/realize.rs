//! Turns a class-level proof into a concrete derivation, making every
//! reordering explicit as perm / perm′ steps.

use std::rc::Rc;

use super::arena::{Arena, FId};
use super::class::Alt;
use crate::check::{expected_premises, move_item};
use crate::derivation::{Derivation, Rule};
use crate::formula::{Formula, Sequent};

/// A proof of a class: the rule applied at the root and proofs of its premises.
#[derive(Debug)]
pub(crate) struct CProof {
    pub alt: Alt,
    pub height: u32,
    pub subs: Vec<Rc<CProof>>,
}

struct Layout {
    /// Antecedent positions of the non-∇ formulas, in order.
    fixed: Vec<usize>,
    /// `(position, slot, formula)` for each ∇ formula.
    nablas: Vec<(usize, usize, FId)>,
}

impl Layout {
    fn of(arena: &Arena, ids: &[FId]) -> Self {
        let mut fixed = Vec::new();
        let mut nablas = Vec::new();
        for (p, &id) in ids.iter().enumerate() {
            if arena.is_nabla(id) {
                nablas.push((p, fixed.len(), id));
            } else {
                fixed.push(p);
            }
        }
        Layout { fixed, nablas }
    }

    /// Picks which concrete ∇ formulas play the role of the multiset `m1`,
    /// preferring those already close to where they must end up.
    fn pick(&self, m1: &[FId], cost: impl Fn(usize) -> usize) -> Vec<bool> {
        let mut chosen = vec![false; self.nablas.len()];
        for &want in m1 {
            let best = (0..self.nablas.len())
                .filter(|&k| !chosen[k] && self.nablas[k].2 == want)
                .min_by_key(|&k| (cost(self.nablas[k].1), self.nablas[k].0))
                .expect("multiset member present");
            chosen[best] = true;
        }
        chosen
    }

    /// Target order given `(slot, subkey)` for every ∇ formula.
    fn order(&self, targets: &[(usize, usize)]) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.fixed.len() + self.nablas.len());
        for slot in 0..=self.fixed.len() {
            let mut here: Vec<(usize, usize)> = self
                .nablas
                .iter()
                .zip(targets)
                .filter(|(_, t)| t.0 == slot)
                .map(|(n, t)| (t.1, n.0))
                .collect();
            here.sort_unstable();
            out.extend(here.into_iter().map(|(_, p)| p));
            if let Some(&p) = self.fixed.get(slot) {
                out.push(p);
            }
        }
        out
    }

    fn unchanged(&self) -> Vec<(usize, usize)> {
        self.nablas.iter().map(|n| (n.1, 0)).collect()
    }
}

fn dist(slot: usize, lo: usize, hi: usize) -> usize {
    if slot < lo {
        lo - slot
    } else {
        slot.saturating_sub(hi)
    }
}

/// Chooses a target arrangement for `alt` and the concrete rule at that arrangement.
fn arrange(arena: &Arena, ids: &[FId], alt: &Alt) -> (Vec<usize>, Rule) {
    let lay = Layout::of(arena, ids);
    let at = |order: &[usize], p: usize| order.iter().position(|&q| q == p).expect("present");
    match alt {
        Alt::Axiom => (lay.order(&lay.unchanged()), Rule::Axiom),
        Alt::LeftDivR => (lay.order(&lay.unchanged()), Rule::LeftDivR),
        Alt::RightDivR => (lay.order(&lay.unchanged()), Rule::RightDivR),
        Alt::BangR => (lay.order(&lay.unchanged()), Rule::BangR),
        Alt::NablaR => (lay.order(&lay.unchanged()), Rule::NablaR),
        Alt::ProdL { i } => {
            let order = lay.order(&lay.unchanged());
            let index = at(&order, lay.fixed[*i]);
            (order, Rule::ProdL { index })
        }
        Alt::BangL { i, n } => {
            let order = lay.order(&lay.unchanged());
            let index = at(&order, lay.fixed[*i]);
            (order, Rule::BangL { index, n: *n })
        }
        Alt::NablaL { f, slot } => {
            let chosen = lay.pick(&[*f], |s| dist(s, *slot, *slot));
            let k = chosen.iter().position(|&c| c).unwrap();
            let mut targets = lay.unchanged();
            targets[k] = (*slot, 0);
            let order = lay.order(&targets);
            let index = at(&order, lay.nablas[k].0);
            (order, Rule::NablaL { index })
        }
        Alt::ProdR { k, m1 } => {
            let chosen = lay.pick(m1, |s| dist(s, 0, *k));
            let targets: Vec<_> = lay
                .nablas
                .iter()
                .zip(&chosen)
                .map(|(n, &c)| if c { (n.1.min(*k), 0) } else { (n.1.max(*k), 1) })
                .collect();
            (lay.order(&targets), Rule::ProdR { split: k + m1.len() })
        }
        Alt::LeftDivL { i, j, m1 } => {
            let (i, j) = (*i, *j);
            let chosen = lay.pick(m1, |s| dist(s, j, i));
            let targets: Vec<_> = lay
                .nablas
                .iter()
                .zip(&chosen)
                .map(|(n, &c)| {
                    let s = n.1;
                    if c {
                        (s.clamp(j, i), 1)
                    } else if s <= j || s > i {
                        (s, 0)
                    } else if s - j <= i + 1 - s {
                        (j, 0)
                    } else {
                        (i + 1, 0)
                    }
                })
                .collect();
            let order = lay.order(&targets);
            let index = at(&order, lay.fixed[i]);
            (order, Rule::LeftDivL { index, gamma: i - j + m1.len() })
        }
        Alt::RightDivL { i, j, m1 } => {
            let (i, j) = (*i, *j);
            let chosen = lay.pick(m1, |s| dist(s, i + 1, j));
            let targets: Vec<_> = lay
                .nablas
                .iter()
                .zip(&chosen)
                .map(|(n, &c)| {
                    let s = n.1;
                    if c {
                        (s.clamp(i + 1, j), 0)
                    } else if s <= i || s >= j {
                        (s, 1)
                    } else if s - i <= j - s {
                        (i, 1)
                    } else {
                        (j, 1)
                    }
                })
                .collect();
            let order = lay.order(&targets);
            let index = at(&order, lay.fixed[i]);
            (order, Rule::RightDivL { index, gamma: j - i - 1 + m1.len() })
        }
    }
}

/// perm / perm′ steps rearranging positions `0..n` into `order`.
/// Returns each step's conclusion antecedent (as positions) and rule.
fn perm_chain(order: &[usize], movable: impl Fn(usize) -> bool) -> Vec<(Vec<usize>, Rule)> {
    let mut cur: Vec<usize> = (0..order.len()).collect();
    let mut steps = Vec::new();
    for (t, &want) in order.iter().enumerate() {
        let mut q = cur.iter().position(|&p| p == want).expect("permutation");
        while q != t {
            if movable(want) {
                steps.push((cur.clone(), Rule::PermPrime { from: q, to: t }));
                cur = move_item(&cur, q, t);
                q = t;
            } else {
                // Fixed formulas keep their relative order, so whatever sits
                // at `t` is a ∇ formula that can step past `want`.
                debug_assert!(movable(cur[t]));
                steps.push((cur.clone(), Rule::Perm { from: t, to: q }));
                cur = move_item(&cur, t, q);
                q -= 1;
            }
        }
    }
    steps
}

pub(crate) fn realize(arena: &Arena, proof: &CProof, seq: &Sequent) -> Derivation {
    let ids: Vec<FId> = seq.antecedent.iter().map(|f| arena.id(f)).collect();
    let (order, rule) = arrange(arena, &ids, &proof.alt);
    let pick = |ps: &[usize]| -> Vec<Formula> { ps.iter().map(|&p| seq.antecedent[p].clone()).collect() };
    let target = Sequent::new(pick(&order), seq.succedent.clone());
    let premises = expected_premises(&target, &rule, usize::MAX)
        .expect("class-level rule applies to its arrangement");
    debug_assert_eq!(premises.len(), proof.subs.len());
    let premises = premises
        .iter()
        .zip(&proof.subs)
        .map(|(s, p)| realize(arena, p, s))
        .collect();
    let mut d = Derivation::new(target, rule, premises);
    for (ant, r) in perm_chain(&order, |p| arena.is_nabla(ids[p])).into_iter().rev() {
        d = Derivation::new(Sequent::new(pick(&ant), seq.succedent.clone()), r, vec![d]);
    }
    d
}
