//! Vector-space semantics: formulas become spaces, derivations become maps.
//!
//! Conventions: `A\B` and `B/A` are both stored as `A* ⊗ B` with the dual
//! factor first; `!A` is the truncated Fock space `⊕_{i≤k0} A^⊗i` stored as
//! concatenated layers; `∇A` has the same space as `A`.

mod map;
mod network;
mod ops;
mod shape;
mod value;

use thiserror::Error;

pub use map::LinearMap;
pub use network::{LegId, Network};
pub use ops::{
    curry_left, curry_right, eval_left, eval_right, fock_embed_tilde, fock_map, fock_project, swap, tensor,
};
pub use shape::{context_shape, shape_of, AtomDims, SpaceShape};
pub use value::{approx_eq, approx_eq_slices, kron, permute_axes, TensorValue, ABS_TOL, REL_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticsError {
    #[error("no dimension given for atom `{0}`")]
    MissingAtom(String),
    #[error("atom `{0}` has dimension 0")]
    ZeroDim(String),
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: SpaceShape, found: SpaceShape },
    #[error("expected {expected} coefficients, found {found}")]
    DataLength { expected: usize, found: usize },
    #[error("coefficient {0} is not finite")]
    NonFinite(usize),
    #[error("layer {n} out of range for bound {k0}")]
    LayerOutOfRange { n: usize, k0: usize },
    #[error("{0} is not a Fock space")]
    NotFock(SpaceShape),
    #[error("{0} is not a function space A*⊗B")]
    NotFunction(SpaceShape),
    #[error("factor {index} out of range for {factors} factors")]
    FactorOutOfRange { index: usize, factors: usize },
    #[error("derivation rejected: {0}")]
    Unchecked(#[from] crate::check::CheckError),
    #[error("tensor format: {0}")]
    Format(String),
    #[error("network: {0}")]
    Network(String),
}
