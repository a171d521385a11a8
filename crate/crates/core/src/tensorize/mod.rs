//! The slice tensor of a symbolic matrix: one frontal slice per variable
//! holding its coefficients, and a final slice holding the constants. An
//! assignment of rank `2m` yields an explicit expansion with `2m + n` terms.

mod bundle;
mod expansion;
mod tensor;

use thiserror::Error;

use crate::minrank::MinrankError;

pub use bundle::{
    build_tensor, check_slice_independence, expansion_from_assignment, read_bundle_meta,
    write_bundle_meta, TensorBundle,
};
pub use expansion::{
    factor_rank_one, read_expansion, verify_expansion, write_expansion, Expansion, ExpansionFile,
    RankOneTerm,
};
pub use tensor::{read_tensor, slice, tensor_digest, write_tensor, Tensor};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("dimension mismatch: {0}")]
    Dims(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("matrix has rank above one")]
    NotRankOne,
    #[error("evaluated matrix has rank {rank}, above the bound {bound}")]
    RankTooHigh { rank: usize, bound: usize },
    #[error("malformed tensor data: {0}")]
    Malformed(String),
    #[error("{0}")]
    Matrix(#[from] MinrankError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
