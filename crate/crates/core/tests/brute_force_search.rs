//! Cross-checks the prover against a naive backward search that tries every
//! rule at every position of every arrangement of the antecedent.

mod common;

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{formula, provable, GrowLimits};
use sllm::{search, CalculusConfig, Formula, SearchOutcome, Sequent};

type Key = (Vec<Formula>, Vec<Formula>, Formula);

struct Naive {
    k0: usize,
    memo: HashMap<Key, bool>,
}

/// Every order reachable by moving ∇-formulas about: the other formulas keep
/// their order and the ∇-formulas are placed anywhere among them.
fn arrangements(rest: &[Formula], nablas: &[Formula]) -> Vec<Vec<Formula>> {
    fn go(rest: &[Formula], left: &mut Vec<Formula>, cur: &mut Vec<Formula>, out: &mut HashSet<Vec<Formula>>) {
        if rest.is_empty() && left.is_empty() {
            out.insert(cur.clone());
            return;
        }
        if let Some((first, tail)) = rest.split_first() {
            cur.push(first.clone());
            go(tail, left, cur, out);
            cur.pop();
        }
        for i in 0..left.len() {
            let f = left.remove(i);
            cur.push(f.clone());
            go(rest, left, cur, out);
            cur.pop();
            left.insert(i, f);
        }
    }
    let mut out = HashSet::new();
    go(rest, &mut nablas.to_vec(), &mut Vec::new(), &mut out);
    out.into_iter().collect()
}

impl Naive {
    fn new(k0: usize) -> Self {
        Naive {
            k0,
            memo: HashMap::new(),
        }
    }

    fn provable(&mut self, ant: &[Formula], goal: &Formula) -> bool {
        let rest: Vec<Formula> = ant.iter().filter(|f| !f.is_nabla()).cloned().collect();
        let mut nablas: Vec<Formula> = ant.iter().filter(|f| f.is_nabla()).cloned().collect();
        nablas.sort();
        let key = (rest, nablas, goal.clone());
        if let Some(&known) = self.memo.get(&key) {
            return known;
        }
        let found = arrangements(&key.0, &key.1).iter().any(|a| self.step(a, goal));
        self.memo.insert(key, found);
        found
    }

    fn step(&mut self, ant: &[Formula], goal: &Formula) -> bool {
        let splice = |lo: usize, hi: usize, mid: &[Formula]| -> Vec<Formula> {
            ant[..lo].iter().chain(mid).chain(&ant[hi..]).cloned().collect()
        };
        if ant.len() == 1 && ant[0] == *goal {
            return true;
        }
        match goal {
            Formula::LeftDiv(a, b) => {
                let v: Vec<Formula> = std::iter::once((**a).clone()).chain(ant.iter().cloned()).collect();
                if self.provable(&v, b) {
                    return true;
                }
            }
            Formula::RightDiv(b, a) => {
                let v: Vec<Formula> = ant.iter().cloned().chain(std::iter::once((**a).clone())).collect();
                if self.provable(&v, b) {
                    return true;
                }
            }
            Formula::Product(a, b) => {
                for k in 0..=ant.len() {
                    if self.provable(&ant[..k], a) && self.provable(&ant[k..], b) {
                        return true;
                    }
                }
            }
            Formula::Bang(b) => {
                if let [Formula::Bang(a)] = ant {
                    if self.provable(&[(**a).clone()], b) {
                        return true;
                    }
                }
            }
            Formula::Nabla(b) => {
                if let [Formula::Nabla(a)] = ant {
                    if self.provable(&[(**a).clone()], b) {
                        return true;
                    }
                }
            }
            Formula::Atom(_) => {}
        }
        for i in 0..ant.len() {
            let hit = match &ant[i] {
                Formula::LeftDiv(a, b) => (0..=i).any(|lo| {
                    self.provable(&ant[lo..i], a) && self.provable(&splice(lo, i + 1, &[(**b).clone()]), goal)
                }),
                Formula::RightDiv(b, a) => (i + 1..=ant.len()).any(|hi| {
                    self.provable(&ant[i + 1..hi], a) && self.provable(&splice(i, hi, &[(**b).clone()]), goal)
                }),
                Formula::Product(a, b) => self.provable(&splice(i, i + 1, &[(**a).clone(), (**b).clone()]), goal),
                Formula::Bang(a) => {
                    (1..=self.k0).any(|n| self.provable(&splice(i, i + 1, &vec![(**a).clone(); n]), goal))
                }
                Formula::Nabla(a) => self.provable(&splice(i, i + 1, &[(**a).clone()]), goal),
                Formula::Atom(_) => false,
            };
            if hit {
                return true;
            }
        }
        false
    }
}

fn agree(naive: &mut Naive, seq: &Sequent, cfg: &CalculusConfig) {
    let expected = naive.provable(&seq.antecedent, &seq.succedent);
    let outcome = search(seq, cfg).unwrap();
    let found = match outcome {
        SearchOutcome::Proved(_) => true,
        SearchOutcome::Unprovable => false,
        SearchOutcome::DepthExhausted { min_depth } => panic!("`{seq}` needs depth {min_depth}"),
    };
    assert_eq!(found, expected, "disagreement on `{seq}`");
}

fn all_formulas(depth: usize) -> Vec<Formula> {
    let mut out = vec![Formula::atom("n"), Formula::atom("s")];
    for _ in 0..depth {
        let prev = out.clone();
        for a in &prev {
            out.push(Formula::bang(a.clone()));
            out.push(Formula::nabla(a.clone()));
            for b in &prev {
                out.push(Formula::left_div(a.clone(), b.clone()));
                out.push(Formula::right_div(a.clone(), b.clone()));
                out.push(Formula::product(a.clone(), b.clone()));
            }
        }
        out.sort();
        out.dedup();
    }
    out
}

#[test]
fn agrees_on_every_small_sequent() {
    let cfg = CalculusConfig::new(2, 100).unwrap();
    let mut naive = Naive::new(2);
    let fs = all_formulas(1);
    let mut provable_count = 0;
    let mut total = 0;
    for goal in &fs {
        for a in &fs {
            let mut seqs = vec![Sequent::new(vec![a.clone()], goal.clone())];
            seqs.extend(fs.iter().map(|b| Sequent::new(vec![a.clone(), b.clone()], goal.clone())));
            for seq in seqs {
                agree(&mut naive, &seq, &cfg);
                total += 1;
                provable_count += naive.provable(&seq.antecedent, &seq.succedent) as usize;
            }
        }
    }
    assert!(provable_count > 50, "only {provable_count} of {total} provable");
}

#[test]
fn agrees_on_random_sequents() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb00f);
    for k0 in 1..=2 {
        let cfg = CalculusConfig::new(k0, 100).unwrap();
        let mut naive = Naive::new(k0);
        for _ in 0..300 {
            let len = rng.gen_range(1..=4);
            let ant: Vec<Formula> = (0..len).map(|_| formula(&mut rng, 2)).collect();
            agree(&mut naive, &Sequent::new(ant, formula(&mut rng, 2)), &cfg);
        }
    }
}

#[test]
fn agrees_on_generated_theorems() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57);
    let lim = GrowLimits {
        max_antecedent: 4,
        max_formula_depth: 3,
        k0: 2,
    };
    let cfg = CalculusConfig::new(2, 100).unwrap();
    let mut naive = Naive::new(2);
    for _ in 0..200 {
        let steps = rng.gen_range(1..8);
        let seq = provable(&mut rng, steps, lim).conclusion;
        assert!(naive.provable(&seq.antecedent, &seq.succedent), "naive search misses `{seq}`");
        agree(&mut naive, &seq, &cfg);
    }
}
