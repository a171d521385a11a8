//! Reduction compiler from conjunctions of polynomial equations to minrank
//! matrices and tensor-rank instances, together with exact rank tooling.
//!
//! The pipeline is `syslang` (parse, quadratize, normalize), `minrank`
//! (block matrix construction and brute-force minrank), `tensorize` (the
//! slice tensor and rank expansions) and `ranklab` (exhaustive tensor rank,
//! slice absorption, realization spaces, eigenvalue zero).

pub mod budget;
pub mod fields;
pub mod minrank;
pub mod ranklab;
pub mod syslang;
pub mod tensorize;
