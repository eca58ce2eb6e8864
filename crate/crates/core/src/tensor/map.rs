//! Linear maps as contraction plans over a [`Network`].

use std::fmt;
use std::sync::Arc;

use super::network::{LegId, Network};
use super::shape::SpaceShape;
use super::value::TensorValue;
use super::SemanticsError;

type Plan = dyn Fn(&mut Network, Vec<LegId>) -> Result<LegId, SemanticsError> + Send + Sync;

/// A map `⊗ domain → codomain`. The plan receives one leg per domain factor
/// and returns the output leg.
#[derive(Clone)]
pub struct LinearMap {
    pub domain: Vec<SpaceShape>,
    pub codomain: SpaceShape,
    plan: Arc<Plan>,
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearMap")
            .field("domain", &self.domain)
            .field("codomain", &self.codomain)
            .finish_non_exhaustive()
    }
}

impl LinearMap {
    pub fn new<F>(domain: Vec<SpaceShape>, codomain: SpaceShape, plan: F) -> Self
    where
        F: Fn(&mut Network, Vec<LegId>) -> Result<LegId, SemanticsError> + Send + Sync + 'static,
    {
        LinearMap {
            domain,
            codomain,
            plan: Arc::new(plan),
        }
    }

    pub fn identity(shape: SpaceShape) -> Self {
        LinearMap::new(vec![shape.clone()], shape, |_, legs| Ok(legs[0]))
    }

    /// A map given by its `dim(domain) × dim(codomain)` coefficient matrix.
    pub fn from_matrix(domain: SpaceShape, codomain: SpaceShape, data: Vec<f64>) -> Result<Self, SemanticsError> {
        let (di, dout) = (domain.total_dim(), codomain.total_dim());
        if data.len() != di * dout {
            return Err(SemanticsError::DataLength {
                expected: di * dout,
                found: data.len(),
            });
        }
        let data = Arc::new(data);
        Ok(LinearMap::new(vec![domain], codomain, move |net, legs| {
            net.matrix(legs[0], data.as_ref().clone(), di, dout)
        }))
    }

    pub fn domain_shape(&self) -> SpaceShape {
        SpaceShape::context(self.domain.clone())
    }

    /// Runs the plan on existing legs of a network.
    pub fn run(&self, net: &mut Network, legs: Vec<LegId>) -> Result<LegId, SemanticsError> {
        if legs.len() != self.domain.len() {
            return Err(SemanticsError::Network(format!(
                "map takes {} inputs, got {}",
                self.domain.len(),
                legs.len()
            )));
        }
        (self.plan)(net, legs)
    }

    /// Applies the map to a dense element of its whole domain.
    pub fn apply(&self, t: &TensorValue) -> Result<TensorValue, SemanticsError> {
        let shape = self.domain_shape();
        if t.shape != shape {
            return Err(SemanticsError::ShapeMismatch {
                expected: shape,
                found: t.shape.clone(),
            });
        }
        let mut net = Network::new();
        let dims: Vec<usize> = self.domain.iter().map(SpaceShape::total_dim).collect();
        let legs = if dims.is_empty() {
            net.input(t.data.clone(), &[]);
            Vec::new()
        } else {
            net.input(t.data.clone(), &dims)
        };
        self.finish(net, legs)
    }

    /// Applies the map to a product input, one tensor per domain factor.
    pub fn apply_factors(&self, inputs: &[TensorValue]) -> Result<TensorValue, SemanticsError> {
        if inputs.len() != self.domain.len() {
            return Err(SemanticsError::Network(format!(
                "map takes {} inputs, got {}",
                self.domain.len(),
                inputs.len()
            )));
        }
        let mut net = Network::new();
        let mut legs = Vec::new();
        for (t, s) in inputs.iter().zip(&self.domain) {
            if &t.shape != s {
                return Err(SemanticsError::ShapeMismatch {
                    expected: s.clone(),
                    found: t.shape.clone(),
                });
            }
            legs.push(net.input(t.data.clone(), &[s.total_dim()])[0]);
        }
        self.finish(net, legs)
    }

    fn finish(&self, mut net: Network, legs: Vec<LegId>) -> Result<TensorValue, SemanticsError> {
        let out = self.run(&mut net, legs)?;
        let data = net.finish(&[out])?;
        TensorValue::new(self.codomain.clone(), data)
    }

    /// Coefficient matrix, `dim(domain) × dim(codomain)`.
    pub fn to_matrix(&self) -> Result<Vec<f64>, SemanticsError> {
        let mut net = Network::new();
        let d: usize = self.domain.iter().map(SpaceShape::total_dim).product();
        let (x, y) = net.identity(d);
        let dims: Vec<usize> = self.domain.iter().map(SpaceShape::total_dim).collect();
        let legs = if dims.is_empty() {
            // Unit domain: the identity on a 1-dimensional space is the scalar 1.
            net.contract(x, y)?;
            let out = self.run(&mut net, Vec::new())?;
            return net.finish(&[out]);
        } else {
            net.split(y, &dims)?
        };
        let out = self.run(&mut net, legs)?;
        net.finish(&[x, out])
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &LinearMap) -> Result<LinearMap, SemanticsError> {
        if g.domain != [self.codomain.clone()] {
            return Err(SemanticsError::ShapeMismatch {
                expected: g.domain_shape(),
                found: self.codomain.clone(),
            });
        }
        let f = self.clone();
        let g2 = g.clone();
        Ok(LinearMap::new(self.domain.clone(), g.codomain.clone(), move |net, legs| {
            let mid = f.run(net, legs)?;
            g2.run(net, vec![mid])
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let f = LinearMap::from_matrix(SpaceShape::Base(2), SpaceShape::Base(3), m.clone()).unwrap();
        assert_eq!(f.to_matrix().unwrap(), m);
        let out = f.apply(&TensorValue::vector(vec![1.0, 0.0])).unwrap();
        assert_eq!(out.data, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn composition_matches_stepwise() {
        let f = LinearMap::from_matrix(SpaceShape::Base(2), SpaceShape::Base(2), vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let g = LinearMap::from_matrix(SpaceShape::Base(2), SpaceShape::Base(1), vec![2.0, 3.0]).unwrap();
        let v = TensorValue::vector(vec![5.0, 7.0]);
        let composed = f.then(&g).unwrap().apply(&v).unwrap();
        let stepwise = g.apply(&f.apply(&v).unwrap()).unwrap();
        assert_eq!(composed, stepwise);
        assert!(g.then(&g).is_err());
    }

    #[test]
    fn rejects_wrong_shape() {
        let id = LinearMap::identity(SpaceShape::Base(2));
        assert!(id.apply(&TensorValue::vector(vec![1.0])).is_err());
        assert_eq!(id.apply(&TensorValue::vector(vec![3.0, 4.0])).unwrap().data, vec![3.0, 4.0]);
    }
}
