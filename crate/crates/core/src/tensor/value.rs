//! Dense tensors over a [`SpaceShape`].

use std::fmt;
use std::str::FromStr;

use super::shape::SpaceShape;
use super::SemanticsError;

/// Relative tolerance for floating comparisons.
pub const REL_TOL: f64 = 1e-10;
/// Absolute floor under the relative tolerance.
pub const ABS_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct TensorValue {
    pub shape: SpaceShape,
    pub data: Vec<f64>,
}

impl TensorValue {
    pub fn new(shape: SpaceShape, data: Vec<f64>) -> Result<Self, SemanticsError> {
        if data.len() != shape.total_dim() {
            return Err(SemanticsError::DataLength {
                expected: shape.total_dim(),
                found: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|x| !x.is_finite()) {
            return Err(SemanticsError::NonFinite(i));
        }
        Ok(TensorValue { shape, data })
    }

    pub fn zeros(shape: SpaceShape) -> Self {
        let data = vec![0.0; shape.total_dim()];
        TensorValue { shape, data }
    }

    pub fn vector(data: Vec<f64>) -> Self {
        TensorValue {
            shape: SpaceShape::Base(data.len()),
            data,
        }
    }

    pub fn scalar(x: f64) -> Self {
        TensorValue {
            shape: SpaceShape::Unit,
            data: vec![x],
        }
    }

    /// Basis vector `e_i` of a shape.
    pub fn basis(shape: SpaceShape, i: usize) -> Self {
        let mut t = TensorValue::zeros(shape);
        t.data[i] = 1.0;
        t
    }

    /// The same coefficients viewed under another shape of equal size.
    pub fn reshaped(&self, shape: SpaceShape) -> Result<Self, SemanticsError> {
        TensorValue::new(shape, self.data.clone())
    }

    pub fn scale(&self, a: f64) -> Self {
        TensorValue {
            shape: self.shape.clone(),
            data: self.data.iter().map(|x| a * x).collect(),
        }
    }

    pub fn add(&self, other: &TensorValue) -> Result<Self, SemanticsError> {
        self.same_shape(other)?;
        Ok(TensorValue {
            shape: self.shape.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    fn same_shape(&self, other: &TensorValue) -> Result<(), SemanticsError> {
        if self.shape != other.shape {
            return Err(SemanticsError::ShapeMismatch {
                expected: self.shape.clone(),
                found: other.shape.clone(),
            });
        }
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Entrywise closeness under the shared tolerances, with matching shapes.
    pub fn approx_eq(&self, other: &TensorValue) -> bool {
        self.shape == other.shape && approx_eq_slices(&self.data, &other.data)
    }

    /// Largest entrywise difference relative to the larger norm.
    pub fn rel_diff(&self, other: &TensorValue) -> f64 {
        let scale = self.norm().max(other.norm()).max(ABS_TOL);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            / scale
    }

    pub fn to_text(&self) -> String {
        let coeffs: Vec<String> = self.data.iter().map(|x| format!("{x:?}")).collect();
        format!("{}\n{}\n", self.shape, coeffs.join(" "))
    }

    pub fn from_text(text: &str) -> Result<Self, SemanticsError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let shape: SpaceShape = lines
            .next()
            .ok_or_else(|| SemanticsError::Format("missing shape line".into()))?
            .parse()?;
        let mut data = Vec::new();
        for line in lines {
            for tok in line.split_whitespace() {
                data.push(
                    tok.parse::<f64>()
                        .map_err(|_| SemanticsError::Format(format!("bad coefficient `{tok}`")))?,
                );
            }
        }
        TensorValue::new(shape, data)
    }
}

impl fmt::Display for TensorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for TensorValue {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TensorValue::from_text(s)
    }
}

pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= ABS_TOL + REL_TOL * a.abs().max(b.abs())
}

/// Slices agree entrywise, measuring error relative to the larger norm.
pub fn approx_eq_slices(a: &[f64], b: &[f64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = norm(a).max(norm(b));
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= ABS_TOL + REL_TOL * scale)
}

/// Outer product of flat arrays (row-major: `a` varies slowest).
pub fn kron(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        out.extend(b.iter().map(|y| x * y));
    }
    out
}

/// Reorders the axes of a row-major array: output axis `k` is input axis `perm[k]`.
pub fn permute_axes(data: &[f64], dims: &[usize], perm: &[usize]) -> Vec<f64> {
    debug_assert_eq!(dims.len(), perm.len());
    if perm.iter().enumerate().all(|(k, &p)| k == p) {
        return data.to_vec();
    }
    let rank = dims.len();
    let mut in_strides = vec![1; rank];
    for k in (0..rank.saturating_sub(1)).rev() {
        in_strides[k] = in_strides[k + 1] * dims[k + 1];
    }
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let strides: Vec<usize> = perm.iter().map(|&p| in_strides[p]).collect();
    let mut out = Vec::with_capacity(data.len());
    let mut idx = vec![0; rank];
    let mut src = 0;
    for _ in 0..data.len() {
        out.push(data[src]);
        // Odometer increment over the output index.
        for k in (0..rank).rev() {
            idx[k] += 1;
            src += strides[k];
            if idx[k] < out_dims[k] {
                break;
            }
            src -= strides[k] * out_dims[k];
            idx[k] = 0;
        }
    }
    out
}

/// `(m×k)·(k×n)`, row-major.
pub fn matmul(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * n];
    for i in 0..m {
        let row = &mut out[i * n..(i + 1) * n];
        for p in 0..k {
            let x = a[i * k + p];
            if x == 0.0 {
                continue;
            }
            for (o, y) in row.iter_mut().zip(&b[p * n..(p + 1) * n]) {
                *o += x * y;
            }
        }
    }
    out
}
