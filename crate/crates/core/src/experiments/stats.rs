//! Cosine similarity, rank correlation, grouped t-tests and triplet accuracy.

use super::ExperimentError;

fn stats_err(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Stats(msg.into())
}

/// `u·v / (|u||v|)`; a zero vector gives 0 with a warning.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, ExperimentError> {
    if u.len() != v.len() {
        return Err(stats_err(format!("cosine of vectors of length {} and {}", u.len(), v.len())));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        log::warn!("cosine with a zero vector; using 0");
        return Ok(0.0);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, ExperimentError> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(stats_err(format!(
            "correlation needs two equal-length samples of at least 2, found {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(stats_err("correlation is undefined for a constant sample"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's ρ: Pearson correlation of average ranks.
pub fn spearman_rho(xs: &[f64], ys: &[f64]) -> Result<f64, ExperimentError> {
    if xs.len() != ys.len() {
        return Err(stats_err(format!("samples of length {} and {}", xs.len(), ys.len())));
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn var(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Student's t for `a` against `b`: pooled two-sample, or paired on `a - b`.
///
/// `None` when undefined (fewer than two values, or zero spread with a
/// nonzero mean difference). Zero spread with equal means gives 0.
pub fn t_statistic(a: &[f64], b: &[f64], paired: bool) -> Option<f64> {
    let (diff, se) = if paired {
        if a.len() != b.len() || a.len() < 2 {
            return None;
        }
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        (mean(&d), (var(&d) / d.len() as f64).sqrt())
    } else {
        if a.len() < 2 || b.len() < 2 {
            return None;
        }
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let pooled = ((na - 1.0) * var(a) + (nb - 1.0) * var(b)) / (na + nb - 2.0);
        (mean(a) - mean(b), (pooled * (1.0 / na + 1.0 / nb)).sqrt())
    };
    if se == 0.0 {
        return (diff == 0.0).then_some(0.0);
    }
    Some(diff / se)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TTestOptions {
    pub paired: bool,
    /// Map human scores from `[1, 7]` onto `[0, 1]` before comparing.
    pub normalize: bool,
}

impl Default for TTestOptions {
    fn default() -> Self {
        TTestOptions {
            paired: false,
            normalize: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TTestReport {
    /// Mean of `|t|` over the groups that had a defined statistic.
    pub mean_t: f64,
    pub per_group: Vec<Option<f64>>,
    pub skipped: usize,
}

/// Per-group t between human scores and cosines, averaged in absolute value.
pub fn t_test_report(
    groups: &[Vec<usize>],
    human: &[f64],
    cosines: &[f64],
    opts: TTestOptions,
) -> Result<TTestReport, ExperimentError> {
    if human.len() != cosines.len() {
        return Err(stats_err(format!("{} human scores but {} cosines", human.len(), cosines.len())));
    }
    let mut per_group = Vec::with_capacity(groups.len());
    let mut used = Vec::new();
    for (g, members) in groups.iter().enumerate() {
        if let Some(&bad) = members.iter().find(|&&i| i >= human.len()) {
            return Err(stats_err(format!("group {g} refers to missing pair {bad}")));
        }
        let h: Vec<f64> = members
            .iter()
            .map(|&i| if opts.normalize { (human[i] - 1.0) / 6.0 } else { human[i] })
            .collect();
        let c: Vec<f64> = members.iter().map(|&i| cosines[i]).collect();
        let t = t_statistic(&h, &c, opts.paired);
        match t {
            Some(t) => used.push(t.abs()),
            None => log::warn!("skipping group {g} ({} members): t undefined", members.len()),
        }
        per_group.push(t);
    }
    if used.is_empty() {
        return Err(stats_err("no group has a defined t statistic"));
    }
    Ok(TTestReport {
        mean_t: mean(&used),
        skipped: groups.len() - used.len(),
        per_group,
    })
}

/// Fraction of triplets whose cosine order agrees with the human order.
///
/// Each triplet names the pairs `(1,2)` and `(1,3)` by index. Exact ties count
/// as incorrect unless both sides tie.
pub fn classify_triplets(
    triplets: &[(usize, usize)],
    cosines: &[f64],
    human: &[f64],
) -> Result<f64, ExperimentError> {
    if triplets.is_empty() {
        return Err(stats_err("no triplets to classify"));
    }
    let mut correct = 0usize;
    for &(a, b) in triplets {
        let get = |v: &[f64], i: usize| {
            v.get(i)
                .copied()
                .ok_or_else(|| stats_err(format!("triplet refers to missing pair {i}")))
        };
        let dc = get(cosines, a)? - get(cosines, b)?;
        let dh = get(human, a)? - get(human, b)?;
        let agree = match (dc == 0.0, dh == 0.0) {
            (true, true) => true,
            (false, false) => (dc > 0.0) == (dh > 0.0),
            _ => false,
        };
        correct += usize::from(agree);
    }
    Ok(correct as f64 / triplets.len() as f64)
}
