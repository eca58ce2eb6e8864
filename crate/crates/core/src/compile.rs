//! Derivations to linear maps, one constructor per rule.

use crate::check::{check_derivation, move_item};
use crate::derivation::{Derivation, Rule};
use crate::formula::{CalculusConfig, Formula};
use crate::tensor::{fock_map, shape_of, AtomDims, LegId, LinearMap, SemanticsError, SpaceShape};

/// Compiles a checked derivation into a map from its antecedent's space to its
/// succedent's space.
pub fn compile_derivation(
    d: &Derivation,
    dims: &AtomDims,
    cfg: &CalculusConfig,
) -> Result<LinearMap, SemanticsError> {
    check_derivation(d, cfg)?;
    build(d, dims, cfg.k0)
}

fn spliced(legs: &[LegId], lo: usize, hi: usize, mid: &[LegId]) -> Vec<LegId> {
    let mut v = legs[..lo].to_vec();
    v.extend_from_slice(mid);
    v.extend_from_slice(&legs[hi..]);
    v
}

fn split_dims(f: &Formula, dims: &AtomDims, k0: usize) -> Result<(usize, usize), SemanticsError> {
    match shape_of(f, dims, k0)? {
        SpaceShape::Tensor(fs) if fs.len() == 2 => Ok((fs[0].total_dim(), fs[1].total_dim())),
        other => Err(SemanticsError::NotFunction(other)),
    }
}

fn build(d: &Derivation, dims: &AtomDims, k0: usize) -> Result<LinearMap, SemanticsError> {
    let ant = &d.conclusion.antecedent;
    let domain = ant
        .iter()
        .map(|f| shape_of(f, dims, k0))
        .collect::<Result<Vec<_>, _>>()?;
    let codomain = shape_of(&d.conclusion.succedent, dims, k0)?;
    let subs = d
        .premises
        .iter()
        .map(|p| build(p, dims, k0))
        .collect::<Result<Vec<_>, _>>()?;
    let goal = &d.conclusion.succedent;

    let map = match d.rule {
        Rule::Axiom => LinearMap::new(domain, codomain, |_, legs| Ok(legs[0])),
        Rule::Perm { from, to } | Rule::PermPrime { from, to } => {
            let f = subs[0].clone();
            LinearMap::new(domain, codomain, move |net, legs| f.run(net, move_item(&legs, from, to)))
        }
        Rule::NablaL { .. } | Rule::NablaR => {
            let f = subs[0].clone();
            LinearMap::new(domain, codomain, move |net, legs| f.run(net, legs))
        }
        Rule::ProdL { index } => {
            // A·B is already A ⊗ B; only the leg bookkeeping changes.
            let (da, db) = match &domain[index] {
                SpaceShape::Tensor(fs) => (fs[0].total_dim(), fs[1].total_dim()),
                other => return Err(SemanticsError::NotFunction(other.clone())),
            };
            let f = subs[0].clone();
            LinearMap::new(domain, codomain, move |net, legs| {
                let parts = net.split(legs[index], &[da, db])?;
                f.run(net, spliced(&legs, index, index + 1, &parts))
            })
        }
        Rule::ProdR { split } => {
            let (f, g) = (subs[0].clone(), subs[1].clone());
            LinearMap::new(domain, codomain, move |net, legs| {
                let a = f.run(net, legs[..split].to_vec())?;
                let b = g.run(net, legs[split..].to_vec())?;
                net.fuse(&[a, b])
            })
        }
        Rule::LeftDivL { index, gamma } => {
            let (da, db) = split_dims(&ant[index], dims, k0)?;
            let (f, g) = (subs[0].clone(), subs[1].clone());
            LinearMap::new(domain, codomain, move |net, legs| {
                let lo = index - gamma;
                let parts = net.split(legs[index], &[da, db])?;
                let a = f.run(net, legs[lo..index].to_vec())?;
                net.contract(a, parts[0])?;
                g.run(net, spliced(&legs, lo, index + 1, &parts[1..]))
            })
        }
        Rule::RightDivL { index, gamma } => {
            let (da, db) = split_dims(&ant[index], dims, k0)?;
            let (f, g) = (subs[0].clone(), subs[1].clone());
            LinearMap::new(domain, codomain, move |net, legs| {
                let hi = index + 1 + gamma;
                let parts = net.split(legs[index], &[da, db])?;
                let a = f.run(net, legs[index + 1..hi].to_vec())?;
                net.contract(a, parts[0])?;
                g.run(net, spliced(&legs, index, hi, &parts[1..]))
            })
        }
        Rule::LeftDivR | Rule::RightDivR => {
            let (da, _) = split_dims(goal, dims, k0)?;
            let left = d.rule == Rule::LeftDivR;
            let f = subs[0].clone();
            LinearMap::new(domain, codomain, move |net, mut legs| {
                let (x, y) = net.identity(da);
                if left {
                    legs.insert(0, y);
                } else {
                    legs.push(y);
                }
                let out = f.run(net, legs)?;
                net.fuse(&[x, out])
            })
        }
        Rule::BangL { index, n } => {
            let da = match &domain[index] {
                SpaceShape::Fock { inner, .. } => inner.total_dim(),
                other => return Err(SemanticsError::NotFock(other.clone())),
            };
            let f = subs[0].clone();
            LinearMap::new(domain, codomain, move |net, legs| {
                let (offset, len) = SpaceShape::layer_range(da, n);
                let layer = net.slice(legs[index], offset, len)?;
                let copies = net.split(layer, &vec![da; n])?;
                f.run(net, spliced(&legs, index, index + 1, &copies))
            })
        }
        Rule::BangR => {
            let tf = fock_map(&subs[0], k0)?;
            LinearMap::new(domain, codomain, move |net, legs| tf.run(net, legs))
        }
    };
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_sequent;
    use crate::search::prove;
    use crate::tensor::{fock_embed_tilde, TensorValue};

    fn dims() -> AtomDims {
        "n=2,s=3".parse().unwrap()
    }

    fn compiled(text: &str) -> LinearMap {
        let cfg = CalculusConfig::default();
        let d = prove(&parse_sequent(text).unwrap(), &cfg).unwrap().unwrap();
        compile_derivation(&d, &dims(), &cfg).unwrap()
    }

    #[test]
    fn axiom_is_identity() {
        let m = compiled("n -> n");
        assert_eq!(m.to_matrix().unwrap(), vec![1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn application_is_matrix_vector() {
        let m = compiled("n, n\\s -> s");
        let x = TensorValue::vector(vec![1.0, 2.0]);
        let verb = TensorValue::new(m.domain[1].clone(), (1..=6).map(f64::from).collect()).unwrap();
        let out = m.apply_factors(&[x, verb]).unwrap();
        // [1 2] · [[1 2 3] [4 5 6]]
        assert_eq!(out.data, vec![9.0, 12.0, 15.0]);
    }

    #[test]
    fn multiplexing_copies_tilde() {
        let m = compiled("!n -> n.n");
        let v = TensorValue::vector(vec![3.0, 5.0]);
        let out = m.apply_factors(&[fock_embed_tilde(&v, 2)]).unwrap();
        assert_eq!(out.data, vec![9.0, 15.0, 15.0, 25.0]);
    }

    #[test]
    fn forged_derivations_are_rejected() {
        let cfg = CalculusConfig::default();
        let bad = Derivation::new(parse_sequent("n -> s").unwrap(), Rule::Axiom, vec![]);
        assert!(matches!(
            compile_derivation(&bad, &dims(), &cfg),
            Err(SemanticsError::Unchecked(_))
        ));
    }

    #[test]
    fn shapes_follow_the_sequent() {
        let m = compiled("n -> s/(n\\s)");
        assert_eq!(m.domain, vec![SpaceShape::Base(2)]);
        assert_eq!(m.codomain.total_dim(), 6 * 3);
        let m = compiled("!n -> !n");
        assert_eq!(m.codomain, SpaceShape::fock(SpaceShape::Base(2), 2));
    }
}
