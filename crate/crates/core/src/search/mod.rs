//! Backward proof search.
//!
//! Search runs over perm classes (see [`class`]): perm and perm′ are free, and
//! depth is measured in the remaining, logical rule steps. Because every
//! logical rule shrinks its sequent, the class graph is finite and acyclic, so
//! the procedure decides provability outright; `max_depth` only limits which
//! proofs are reported.

mod arena;
mod class;
mod realize;
mod solver;

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use thiserror::Error;

use crate::derivation::Derivation;
use crate::formula::{CalculusConfig, ConfigError, Formula, Sequent};
use arena::Arena;
use class::ClassKey;
use realize::{realize, CProof};
use solver::Solver;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Proved(Derivation),
    /// No derivation exists at any depth.
    Unprovable,
    /// Derivations exist, but the shallowest needs `min_depth` logical steps.
    DepthExhausted { min_depth: usize },
}

/// Full search result with bookkeeping.
pub fn search(seq: &Sequent, cfg: &CalculusConfig) -> Result<SearchOutcome, SearchError> {
    let (mut solver, root) = setup(seq, cfg)?;
    let outcome = match solver.min_height(&root) {
        None => SearchOutcome::Unprovable,
        Some(h) if h as usize > cfg.max_depth => SearchOutcome::DepthExhausted {
            min_depth: h as usize,
        },
        Some(_) => {
            let proof = best_proof(&mut solver, &root);
            SearchOutcome::Proved(realize(&solver.arena, &proof, seq))
        }
    };
    log::debug!(
        "search `{seq}`: {} classes visited",
        solver.classes_visited()
    );
    Ok(outcome)
}

/// A shallowest derivation of `seq` within `cfg.max_depth`, if any.
pub fn prove(seq: &Sequent, cfg: &CalculusConfig) -> Result<Option<Derivation>, SearchError> {
    Ok(match search(seq, cfg)? {
        SearchOutcome::Proved(d) => Some(d),
        _ => None,
    })
}

pub fn is_provable(seq: &Sequent, cfg: &CalculusConfig) -> Result<bool, SearchError> {
    Ok(matches!(search(seq, cfg)?, SearchOutcome::Proved(_)))
}

/// Up to `limit` distinct derivations, in a deterministic order.
///
/// Alternatives are interleaved round-robin at every level, so structurally
/// different proofs (for instance different ways of resolving a copy) show up
/// early instead of after every permutation of the first one.
pub fn enumerate_proofs(
    seq: &Sequent,
    cfg: &CalculusConfig,
    limit: usize,
) -> Result<Vec<Derivation>, SearchError> {
    enumerate_proofs_with(seq, cfg, limit, &|_, _| true)
}

/// Like [`enumerate_proofs`], keeping only derivations whose every `!L`
/// step on a formula `!A` into `n` copies satisfies `allow(!A, n)`.
///
/// Readings of an ambiguous sentence often differ in what gets copied; this
/// reaches a particular reading without wading through all the others.
pub fn enumerate_proofs_with(
    seq: &Sequent,
    cfg: &CalculusConfig,
    limit: usize,
    allow: &dyn Fn(&Formula, usize) -> bool,
) -> Result<Vec<Derivation>, SearchError> {
    let (mut solver, root) = setup(seq, cfg)?;
    if limit == 0 {
        return Ok(Vec::new());
    }
    let mut en = Enumerator {
        solver: &mut solver,
        memo: HashMap::new(),
        limit,
        allow,
    };
    let proofs = en.proofs(&root, cfg.max_depth as u32);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in proofs.iter() {
        let d = realize(&solver.arena, p, seq);
        if seen.insert(d.clone()) {
            out.push(d);
        }
    }
    Ok(out)
}

fn setup(seq: &Sequent, cfg: &CalculusConfig) -> Result<(Solver, ClassKey), SearchError> {
    cfg.validate()?;
    cfg.check_atoms(seq)?;
    let arena = Arena::for_sequent(seq, cfg.k0);
    let root = ClassKey::new(
        &arena,
        seq.antecedent.iter().map(|f| arena.id(f)),
        arena.id(&seq.succedent),
    );
    Ok((Solver::new(arena, cfg.k0), root))
}

fn best_proof(solver: &mut Solver, key: &ClassKey) -> Rc<CProof> {
    let entry = solver.entry(key);
    let alt = entry.best.expect("provable class has a best branch");
    let branch = solver
        .branches(key)
        .into_iter()
        .find(|b| b.alt == alt)
        .expect("best branch regenerates");
    let subs: Vec<_> = branch.premises.iter().map(|p| best_proof(solver, p)).collect();
    let height = 1 + subs.iter().map(|s| s.height).max().unwrap_or(0);
    Rc::new(CProof { alt, height, subs })
}

type Proofs = Rc<Vec<Rc<CProof>>>;

struct Enumerator<'a> {
    solver: &'a mut Solver,
    memo: HashMap<(ClassKey, u32), Proofs>,
    limit: usize,
    allow: &'a dyn Fn(&Formula, usize) -> bool,
}

impl Enumerator<'_> {
    /// Proofs of `key` with class-level height at most `budget`.
    fn proofs(&mut self, key: &ClassKey, budget: u32) -> Proofs {
        let Some((min, max)) = self.solver.entry(key).heights else {
            return Rc::new(Vec::new());
        };
        if min > budget {
            return Rc::new(Vec::new());
        }
        // Budgets above the tallest proof all give the same answer.
        let budget = budget.min(max);
        if let Some(p) = self.memo.get(&(key.clone(), budget)) {
            return p.clone();
        }
        let mut per_branch = Vec::new();
        for branch in self.solver.branches(key) {
            if let class::Alt::BangL { i, n } = branch.alt {
                if !(self.allow)(self.solver.arena.formula(key.fixed[i]), n) {
                    continue;
                }
            }
            let fits = branch.premises.iter().all(|p| {
                self.solver
                    .min_height(p)
                    .is_some_and(|h| h < budget)
            });
            if !fits {
                continue;
            }
            let lists: Vec<Proofs> = branch
                .premises
                .iter()
                .map(|p| self.proofs(p, budget - 1))
                .collect();
            per_branch.push(self.combine(&branch.alt, &lists));
        }
        let mut out = Vec::new();
        let longest = per_branch.iter().map(Vec::len).max().unwrap_or(0);
        'outer: for r in 0..longest {
            for list in &per_branch {
                if let Some(p) = list.get(r) {
                    out.push(p.clone());
                    if out.len() == self.limit {
                        break 'outer;
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert((key.clone(), budget), out.clone());
        out
    }

    /// Premise proof combinations, taken along anti-diagonals.
    fn combine(&self, alt: &class::Alt, lists: &[Proofs]) -> Vec<Rc<CProof>> {
        let make = |subs: Vec<Rc<CProof>>| {
            let height = 1 + subs.iter().map(|s| s.height).max().unwrap_or(0);
            Rc::new(CProof {
                alt: alt.clone(),
                height,
                subs,
            })
        };
        match lists {
            [] => vec![make(vec![])],
            [a] => a.iter().take(self.limit).map(|x| make(vec![x.clone()])).collect(),
            [a, b] => {
                let mut out = Vec::new();
                if a.is_empty() || b.is_empty() {
                    return out;
                }
                for s in 0..a.len() + b.len() - 1 {
                    let lo = s.saturating_sub(b.len() - 1);
                    for i in lo..=s.min(a.len() - 1) {
                        out.push(make(vec![a[i].clone(), b[s - i].clone()]));
                        if out.len() == self.limit {
                            return out;
                        }
                    }
                }
                out
            }
            _ => unreachable!("rules have at most two premises"),
        }
    }
}
