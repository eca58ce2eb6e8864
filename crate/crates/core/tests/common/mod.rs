//! Generators and independent reference implementations shared by the
//! integration tests.
#![allow(dead_code)]

pub mod pinned;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sllm::{Derivation, Formula, Rule, Sequent};

pub fn atom(rng: &mut ChaCha8Rng) -> Formula {
    Formula::atom(if rng.gen_bool(0.5) { "n" } else { "s" })
}

/// A random formula over `{n, s}` of depth at most `depth`.
pub fn formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return atom(rng);
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 => Formula::left_div(formula(rng, d), formula(rng, d)),
        1 => Formula::right_div(formula(rng, d), formula(rng, d)),
        2 => Formula::product(formula(rng, d), formula(rng, d)),
        3 => Formula::bang(formula(rng, d)),
        _ => Formula::nabla(formula(rng, d)),
    }
}

pub fn axiom(f: Formula) -> Derivation {
    Derivation::new(Sequent::new(vec![f.clone()], f.clone()), Rule::Axiom, vec![])
}

/// Limits for [`grow`].
#[derive(Clone, Copy, Debug)]
pub struct GrowLimits {
    pub max_antecedent: usize,
    pub max_formula_depth: usize,
    pub k0: usize,
}

fn too_deep(fs: &[Formula], goal: &Formula, lim: GrowLimits) -> bool {
    fs.iter().chain(std::iter::once(goal)).any(|f| f.depth() > lim.max_formula_depth)
}

/// Extends a derivation by one rule application at its root, building the
/// conclusion forwards. Hands the input back when the chosen rule does not fit.
pub fn grow(rng: &mut ChaCha8Rng, d: Derivation, lim: GrowLimits) -> Result<Derivation, Derivation> {
    let orig = d.clone();
    let ant = d.conclusion.antecedent.clone();
    let goal = d.conclusion.succedent.clone();
    let len = ant.len();
    let pick = rng.gen_range(0..12);
    let (new_ant, new_goal, rule, premises) = match pick {
        0 | 1 if len > 0 => {
            // Δ ⊢ A and Γ1, B, Γ2 ⊢ C give Γ1, Δ, A\B, Γ2 ⊢ C or Γ1, B/A, Δ, Γ2 ⊢ C.
            let p = rng.gen_range(0..len);
            let side = axiom(formula(rng, 1));
            let a = side.conclusion.succedent.clone();
            let delta = side.conclusion.antecedent.clone();
            if pick == 0 {
                let mut v = ant[..p].to_vec();
                v.extend(delta.iter().cloned());
                v.push(Formula::left_div(a, ant[p].clone()));
                v.extend_from_slice(&ant[p + 1..]);
                let rule = Rule::LeftDivL {
                    index: p + delta.len(),
                    gamma: delta.len(),
                };
                (v, goal, rule, vec![side, d])
            } else {
                let mut v = ant[..p].to_vec();
                v.push(Formula::right_div(ant[p].clone(), a));
                v.extend(delta.iter().cloned());
                v.extend_from_slice(&ant[p + 1..]);
                let rule = Rule::RightDivL {
                    index: p,
                    gamma: delta.len(),
                };
                (v, goal, rule, vec![side, d])
            }
        }
        2 if len >= 2 => {
            let a = ant[0].clone();
            (ant[1..].to_vec(), Formula::left_div(a, goal), Rule::LeftDivR, vec![d])
        }
        3 if len >= 2 => {
            let a = ant[len - 1].clone();
            (ant[..len - 1].to_vec(), Formula::right_div(goal, a), Rule::RightDivR, vec![d])
        }
        4 if len >= 2 => {
            let p = rng.gen_range(0..len - 1);
            let mut v = ant[..p].to_vec();
            v.push(Formula::product(ant[p].clone(), ant[p + 1].clone()));
            v.extend_from_slice(&ant[p + 2..]);
            (v, goal, Rule::ProdL { index: p }, vec![d])
        }
        5 => {
            let side = axiom(formula(rng, 1));
            let mut v = ant.clone();
            v.extend(side.conclusion.antecedent.iter().cloned());
            let g = Formula::product(goal, side.conclusion.succedent.clone());
            (v, g, Rule::ProdR { split: len }, vec![d, side])
        }
        6 if len > 0 => {
            // The derivation next to a copy of itself, ready for !L(2).
            let mut v = ant.clone();
            v.extend(ant.iter().cloned());
            let g = Formula::product(goal.clone(), goal);
            (v, g, Rule::ProdR { split: len }, vec![d.clone(), d])
        }
        7 if len > 0 => {
            let p = rng.gen_range(0..len);
            let mut v = ant.clone();
            v[p] = Formula::nabla(ant[p].clone());
            (v, goal, Rule::NablaL { index: p }, vec![d])
        }
        8 if len > 0 => {
            // !L, merging a run of equal formulas when there is one.
            let p = rng.gen_range(0..len);
            let n = if p + 1 < len && ant[p] == ant[p + 1] && lim.k0 >= 2 { 2 } else { 1 };
            let mut v = ant[..p].to_vec();
            v.push(Formula::bang(ant[p].clone()));
            v.extend_from_slice(&ant[p + n..]);
            (v, goal, Rule::BangL { index: p, n }, vec![d])
        }
        9 if ant.iter().any(Formula::is_nabla) && len >= 2 => {
            let nablas: Vec<usize> = (0..len).filter(|&i| ant[i].is_nabla()).collect();
            let to = *nablas.choose(rng).expect("some nabla");
            let from = loop {
                let q = rng.gen_range(0..len);
                if q != to {
                    break q;
                }
            };
            let mut v = ant.clone();
            let x = v.remove(to);
            v.insert(from, x);
            let rule = if from < to {
                Rule::Perm { from, to }
            } else {
                Rule::PermPrime { from, to }
            };
            (v, goal, rule, vec![d])
        }
        10 if len == 1 => (
            vec![Formula::nabla(ant[0].clone())],
            Formula::nabla(goal),
            Rule::NablaR,
            vec![d],
        ),
        11 if len == 1 => (
            vec![Formula::bang(ant[0].clone())],
            Formula::bang(goal),
            Rule::BangR,
            vec![d],
        ),
        _ => return Err(d),
    };
    if new_ant.len() > lim.max_antecedent || too_deep(&new_ant, &new_goal, lim) {
        return Err(orig);
    }
    Ok(Derivation::new(Sequent::new(new_ant, new_goal), rule, premises))
}

/// A derivation built forwards from an axiom by up to `steps` random rules.
pub fn provable(rng: &mut ChaCha8Rng, steps: usize, lim: GrowLimits) -> Derivation {
    let mut d = axiom(formula(rng, 1));
    for _ in 0..steps {
        d = match grow(rng, d, lim) {
            Ok(d) | Err(d) => d,
        };
    }
    d
}

// ---- statistics, computed the long way ----

/// Average 1-based rank of each value, counted pairwise.
pub fn brute_ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|x| {
            let less = xs.iter().filter(|y| *y < x).count() as f64;
            let equal = xs.iter().filter(|y| *y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Pearson correlation from raw sums.
pub fn brute_pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (sx, sy): (f64, f64) = (xs.iter().sum(), ys.iter().sum());
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let syy: f64 = ys.iter().map(|y| y * y).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

pub fn brute_spearman(xs: &[f64], ys: &[f64]) -> f64 {
    brute_pearson(&brute_ranks(xs), &brute_ranks(ys))
}

fn sum_sq_dev(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - m) * (x - m)).sum()
}

/// Two-sample Student t with pooled variance, or paired t.
pub fn brute_t(a: &[f64], b: &[f64], paired: bool) -> Option<f64> {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    if paired {
        if a.len() < 2 || a.len() != b.len() {
            return None;
        }
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        let n = d.len() as f64;
        let sd = (sum_sq_dev(&d) / (n - 1.0)).sqrt();
        let num = mean(&d);
        let den = sd / n.sqrt();
        return if den == 0.0 { (num == 0.0).then_some(0.0) } else { Some(num / den) };
    }
    if a.len() < 2 || b.len() < 2 {
        return None;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let sp2 = (sum_sq_dev(a) + sum_sq_dev(b)) / (na + nb - 2.0);
    let num = mean(a) - mean(b);
    let den = (sp2 / na + sp2 / nb).sqrt();
    if den == 0.0 {
        (num == 0.0).then_some(0.0)
    } else {
        Some(num / den)
    }
}

/// Mean `|t|` over groups with a defined statistic, human scores mapped
/// from `[1, 7]` onto `[0, 1]` when `normalize` is set.
pub fn brute_mean_t(groups: &[Vec<usize>], human: &[f64], cos: &[f64], paired: bool, normalize: bool) -> Option<f64> {
    let mut ts = Vec::new();
    for g in groups {
        let h: Vec<f64> = g
            .iter()
            .map(|&i| if normalize { (human[i] - 1.0) / 6.0 } else { human[i] })
            .collect();
        let c: Vec<f64> = g.iter().map(|&i| cos[i]).collect();
        if let Some(t) = brute_t(&h, &c, paired) {
            ts.push(t.abs());
        }
    }
    (!ts.is_empty()).then(|| ts.iter().sum::<f64>() / ts.len() as f64)
}

/// Share of triplets where cosines and human scores order the two pairs the
/// same way (a tie only agrees with a tie).
pub fn brute_accuracy(triplets: &[(usize, usize)], cos: &[f64], human: &[f64]) -> f64 {
    let agree = triplets
        .iter()
        .filter(|&&(a, b)| cos[a].partial_cmp(&cos[b]) == human[a].partial_cmp(&human[b]))
        .count();
    agree as f64 / triplets.len() as f64
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
