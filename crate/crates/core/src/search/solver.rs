//! Memoised decision procedure over perm classes.

use std::collections::HashMap;

use super::arena::Arena;
use super::class::{branches, Alt, Branch, ClassKey};

/// Minimum and maximum class-level proof height, if provable at all.
#[derive(Clone, Debug)]
pub(crate) struct Entry {
    pub heights: Option<(u32, u32)>,
    /// First branch in agenda order reaching the minimum height.
    pub best: Option<Alt>,
}

pub(crate) struct Solver {
    pub arena: Arena,
    pub k0: usize,
    memo: HashMap<ClassKey, Entry>,
}

impl Solver {
    pub fn new(arena: Arena, k0: usize) -> Self {
        Solver {
            arena,
            k0,
            memo: HashMap::new(),
        }
    }

    pub fn classes_visited(&self) -> usize {
        self.memo.len()
    }

    pub fn branches(&self, key: &ClassKey) -> Vec<Branch> {
        branches(key, &self.arena, self.k0)
    }

    pub fn entry(&mut self, key: &ClassKey) -> Entry {
        if let Some(e) = self.memo.get(key) {
            return e.clone();
        }
        let entry = if key.balanced(&self.arena) {
            self.explore(key)
        } else {
            Entry {
                heights: None,
                best: None,
            }
        };
        self.memo.insert(key.clone(), entry.clone());
        entry
    }

    pub fn min_height(&mut self, key: &ClassKey) -> Option<u32> {
        self.entry(key).heights.map(|h| h.0)
    }

    fn explore(&mut self, key: &ClassKey) -> Entry {
        let mut best: Option<(u32, Alt)> = None;
        let mut max = 0;
        for branch in self.branches(key) {
            let mut lo = 0;
            let mut hi = 0;
            let mut ok = true;
            for p in &branch.premises {
                match self.entry(p).heights {
                    Some((a, b)) => {
                        lo = lo.max(a);
                        hi = hi.max(b);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            max = max.max(hi + 1);
            if best.as_ref().is_none_or(|(h, _)| lo + 1 < *h) {
                best = Some((lo + 1, branch.alt));
            }
        }
        match best {
            Some((h, alt)) => Entry {
                heights: Some((h, max)),
                best: Some(alt),
            },
            None => Entry {
                heights: None,
                best: None,
            },
        }
    }
}
