//! Fock-space copying, evaluation, currying and symmetry.

use std::sync::Arc;

use super::map::LinearMap;
use super::shape::SpaceShape;
use super::value::{kron, permute_axes, TensorValue};
use super::SemanticsError;

/// `ṽ = 1 + v + v⊗v + … + v^⊗k0`.
pub fn fock_embed_tilde(v: &TensorValue, k0: usize) -> TensorValue {
    let mut data = Vec::with_capacity(SpaceShape::fock(v.shape.clone(), k0).total_dim());
    let mut layer = vec![1.0];
    for i in 0..=k0 {
        data.extend_from_slice(&layer);
        if i < k0 {
            layer = kron(&layer, &v.data);
        }
    }
    TensorValue {
        shape: SpaceShape::fock(v.shape.clone(), k0),
        data,
    }
}

/// The `n`-th layer of a Fock-space element, as an element of `V^⊗n`.
pub fn fock_project(t: &TensorValue, n: usize) -> Result<TensorValue, SemanticsError> {
    let SpaceShape::Fock { inner, k0 } = &t.shape else {
        return Err(SemanticsError::NotFock(t.shape.clone()));
    };
    if n > *k0 {
        return Err(SemanticsError::LayerOutOfRange { n, k0: *k0 });
    }
    let (offset, len) = SpaceShape::layer_range(inner.total_dim(), n);
    Ok(TensorValue {
        shape: inner.power(n),
        data: t.data[offset..offset + len].to_vec(),
    })
}

/// `T_k0(f)`: acts as `f^⊗i` on layer `i`.
pub fn fock_map(f: &LinearMap, k0: usize) -> Result<LinearMap, SemanticsError> {
    let [dom] = f.domain.as_slice() else {
        return Err(SemanticsError::Network(format!(
            "fock_map needs a single-factor domain, got {}",
            f.domain.len()
        )));
    };
    let m = f.to_matrix()?;
    let (da, db) = (dom.total_dim(), f.codomain.total_dim());
    let domain = SpaceShape::fock(dom.clone(), k0);
    let codomain = SpaceShape::fock(f.codomain.clone(), k0);
    let (fa, fb) = (domain.total_dim(), codomain.total_dim());
    let mut big = vec![0.0; fa * fb];
    // power holds f^⊗i as a (da^i × db^i) matrix.
    let mut power = vec![1.0];
    let (mut rows, mut cols) = (1usize, 1usize);
    for i in 0..=k0 {
        let (ro, _) = SpaceShape::layer_range(da, i);
        let (co, _) = SpaceShape::layer_range(db, i);
        for r in 0..rows {
            let dst = (ro + r) * fb + co;
            big[dst..dst + cols].copy_from_slice(&power[r * cols..(r + 1) * cols]);
        }
        if i < k0 {
            let mut next = vec![0.0; rows * da * cols * db];
            let ncols = cols * db;
            for r in 0..rows {
                for a in 0..da {
                    for c in 0..cols {
                        let x = power[r * cols + c];
                        if x == 0.0 {
                            continue;
                        }
                        for b in 0..db {
                            next[(r * da + a) * ncols + c * db + b] = x * m[a * db + b];
                        }
                    }
                }
            }
            power = next;
            rows *= da;
            cols *= db;
        }
    }
    let big = Arc::new(big);
    Ok(LinearMap::new(vec![domain], codomain, move |net, legs| {
        net.matrix(legs[0], big.as_ref().clone(), fa, fb)
    }))
}

fn contract_first(a: &TensorValue, m: &TensorValue) -> Result<TensorValue, SemanticsError> {
    let SpaceShape::Tensor(fs) = &m.shape else {
        return Err(SemanticsError::NotFunction(m.shape.clone()));
    };
    let [SpaceShape::Dual(arg), res] = fs.as_slice() else {
        return Err(SemanticsError::NotFunction(m.shape.clone()));
    };
    if **arg != a.shape {
        return Err(SemanticsError::ShapeMismatch {
            expected: (**arg).clone(),
            found: a.shape.clone(),
        });
    }
    let dr = res.total_dim();
    let mut out = vec![0.0; dr];
    for (i, &x) in a.data.iter().enumerate() {
        for (o, y) in out.iter_mut().zip(&m.data[i * dr..(i + 1) * dr]) {
            *o += x * y;
        }
    }
    Ok(TensorValue {
        shape: res.clone(),
        data: out,
    })
}

/// `ev(a ⊗ m)` for `m ∈ A*⊗B`, the meaning of `A\B` applied to its left argument.
pub fn eval_left(a: &TensorValue, m: &TensorValue) -> Result<TensorValue, SemanticsError> {
    contract_first(a, m)
}

/// `ev(m ⊗ a)` for `m` interpreting `B/A`, stored dual-first as `A*⊗B`.
pub fn eval_right(m: &TensorValue, a: &TensorValue) -> Result<TensorValue, SemanticsError> {
    contract_first(a, m)
}

/// `Λ^l`: from `A⊗Γ → B` to `Γ → A*⊗B`.
pub fn curry_left(f: &LinearMap) -> Result<LinearMap, SemanticsError> {
    let (a, gamma) = f
        .domain
        .split_first()
        .ok_or_else(|| SemanticsError::Network("curry_left needs a non-empty domain".into()))?;
    let da = a.total_dim();
    let g = f.clone();
    Ok(LinearMap::new(
        gamma.to_vec(),
        SpaceShape::Tensor(vec![SpaceShape::dual(a.clone()), f.codomain.clone()]),
        move |net, legs| {
            let (x, y) = net.identity(da);
            let mut inputs = vec![y];
            inputs.extend(legs);
            let out = g.run(net, inputs)?;
            net.fuse(&[x, out])
        },
    ))
}

/// `Λ^r`: from `Γ⊗A → B` to `Γ → A*⊗B` (dual factor first, as for `B/A`).
pub fn curry_right(f: &LinearMap) -> Result<LinearMap, SemanticsError> {
    let (a, gamma) = f
        .domain
        .split_last()
        .ok_or_else(|| SemanticsError::Network("curry_right needs a non-empty domain".into()))?;
    let da = a.total_dim();
    let g = f.clone();
    Ok(LinearMap::new(
        gamma.to_vec(),
        SpaceShape::Tensor(vec![SpaceShape::dual(a.clone()), f.codomain.clone()]),
        move |net, mut legs| {
            let (x, y) = net.identity(da);
            legs.push(y);
            let out = g.run(net, legs)?;
            net.fuse(&[x, out])
        },
    ))
}

/// Exchanges top-level tensor factors `i` and `j`.
pub fn swap(t: &TensorValue, i: usize, j: usize) -> Result<TensorValue, SemanticsError> {
    let SpaceShape::Tensor(fs) = &t.shape else {
        return Err(SemanticsError::FactorOutOfRange { index: i.max(j), factors: 1 });
    };
    if i >= fs.len() || j >= fs.len() {
        return Err(SemanticsError::FactorOutOfRange {
            index: i.max(j),
            factors: fs.len(),
        });
    }
    let dims: Vec<usize> = fs.iter().map(SpaceShape::total_dim).collect();
    let mut perm: Vec<usize> = (0..fs.len()).collect();
    perm.swap(i, j);
    let mut shapes = fs.clone();
    shapes.swap(i, j);
    Ok(TensorValue {
        shape: SpaceShape::Tensor(shapes),
        data: permute_axes(&t.data, &dims, &perm),
    })
}

/// `a ⊗ b`.
pub fn tensor(a: &TensorValue, b: &TensorValue) -> TensorValue {
    TensorValue {
        shape: SpaceShape::Tensor(vec![a.shape.clone(), b.shape.clone()]),
        data: kron(&a.data, &b.data),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> TensorValue {
        TensorValue::vector(xs.to_vec())
    }

    #[test]
    fn tilde_layers() {
        let t = fock_embed_tilde(&v(&[1.0, 2.0]), 2);
        assert_eq!(t.data, vec![1.0, 1.0, 2.0, 1.0, 2.0, 2.0, 4.0]);
        assert_eq!(fock_embed_tilde(&v(&[0.0, 0.0]), 2).data, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(fock_embed_tilde(&v(&[1.0]), 3).data, vec![1.0; 4]);
    }

    #[test]
    fn projections() {
        let t = fock_embed_tilde(&v(&[1.0, 2.0]), 2);
        assert_eq!(fock_project(&t, 2).unwrap().data, vec![1.0, 2.0, 2.0, 4.0]);
        assert_eq!(fock_project(&t, 0).unwrap(), TensorValue::scalar(1.0));
        assert_eq!(fock_project(&t, 1).unwrap(), v(&[1.0, 2.0]));
        assert!(matches!(fock_project(&t, 3), Err(SemanticsError::LayerOutOfRange { .. })));
        assert!(fock_project(&v(&[1.0]), 0).is_err());
    }

    #[test]
    fn fock_map_scales_layers() {
        let f = LinearMap::from_matrix(SpaceShape::Base(1), SpaceShape::Base(1), vec![2.0]).unwrap();
        let tf = fock_map(&f, 2).unwrap();
        let x = TensorValue::new(SpaceShape::fock(SpaceShape::Base(1), 2), vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(tf.apply(&x).unwrap().data, vec![1.0, 2.0, 4.0]);
        let id = fock_map(&LinearMap::identity(SpaceShape::Base(2)), 2).unwrap();
        let y = TensorValue::new(id.domain_shape(), (0..7).map(f64::from).collect()).unwrap();
        assert_eq!(id.apply(&y).unwrap().data, y.data);
    }

    #[test]
    fn evaluation() {
        let ident = TensorValue::new("(tensor (dual 2) 2)".parse().unwrap(), vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(eval_left(&v(&[3.0, 4.0]), &ident).unwrap().data, vec![3.0, 4.0]);
        let m = TensorValue::new("(tensor (dual 2) 2)".parse().unwrap(), vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(eval_left(&v(&[1.0, 0.0]), &m).unwrap().data, vec![0.0, 1.0]);
        assert_eq!(eval_right(&m, &v(&[1.0, 0.0])).unwrap().data, vec![0.0, 1.0]);
        assert!(eval_left(&v(&[1.0]), &m).is_err());
    }

    #[test]
    fn curry_reads_rows() {
        // f(e_i ⊗ e_j) = M[i][j] with M = [[1,2],[3,4]]
        let f = LinearMap::new(
            vec![SpaceShape::Base(2), SpaceShape::Base(2)],
            SpaceShape::Base(1),
            |net, legs| {
                let m = net.input(vec![1.0, 2.0, 3.0, 4.0], &[2, 2]);
                net.contract(legs[0], m[0])?;
                net.contract(legs[1], m[1])?;
                Ok(net.input(vec![1.0], &[1])[0])
            },
        );
        let c = curry_right(&f).unwrap();
        let row = c.apply(&TensorValue::basis(SpaceShape::Base(2), 0)).unwrap();
        assert_eq!(row.data, vec![1.0, 2.0]);
        let l = curry_left(&f).unwrap();
        let col = l.apply(&TensorValue::basis(SpaceShape::Base(2), 0)).unwrap();
        assert_eq!(col.data, vec![1.0, 3.0]);
    }

    #[test]
    fn swap_is_symmetry() {
        let t = tensor(&v(&[1.0, 0.0]), &v(&[0.0, 1.0]));
        let s = swap(&t, 0, 1).unwrap();
        assert_eq!(s, tensor(&v(&[0.0, 1.0]), &v(&[1.0, 0.0])));
        assert_eq!(swap(&s, 0, 1).unwrap(), t);
        assert!(swap(&t, 0, 2).is_err());
    }
}
