//! Tensor rank tools over finite fields: exhaustive rank decisions, slice
//! absorption, realization spaces for fixed rank-one families and the
//! eigenvalue-zero test for cubical tensors.

mod absorb;
mod eig0;
mod realize;
mod search;

use thiserror::Error;

use crate::budget::BudgetExceeded;
use crate::fields::{FieldError, FieldSpec};
use crate::tensorize::TensorError;

pub use absorb::{absorb_slice, absorb_slices, pins_slice};
pub use eig0::{eig0, splits_evenly, tensor_from_homogeneous, Eig0Result, QuadraticForm};
pub use realize::{
    expansion_from_point, read_family, realization_space, write_family, RealizationSpace,
    SliceFamily,
};
pub use search::{canonical_vectors, tensor_rank_leq, RankDecision, Verdict};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RankError {
    #[error("exhaustive search needs a prime field, got {0}")]
    NotPrimeField(FieldSpec),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: {0}")]
    Dims(String),
    #[error("expansion does not sum to the tensor")]
    NotVerified,
    #[error("slice {} has rank above one", .0 + 1)]
    NotRankOne(usize),
    #[error("slices are linearly dependent")]
    Dependent,
    #[error("no remaining term has a nonzero weight on slice {}", .0 + 1)]
    NoPivot(usize),
    #[error("tensor of shape {0:?} is not cubical")]
    NotCubical([usize; 3]),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("internal error: {0}")]
    Internal(String),
}
