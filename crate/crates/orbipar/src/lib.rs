//! Exact local computations for equivariant bundles, parabolic data and the
//! functors between them, over finite fields with truncated power series.
//!
//! The layers build on each other:
//! [`algebra`] (fields, series, matrices, linear solving),
//! [`local_galois`] (finite groups acting on `k[[s]]` by substitution),
//! [`equivariant`] (cocycles, product modules, invariants, trivialization),
//! [`parabolic`] (parabolic data, glued bundles, the functors `T` and `S`),
//! [`pvect_ops`] (pullback, tensor, dual, pushforward, weights) and
//! [`cli`] (scenario files and reports).

pub mod algebra;
pub mod cli;
pub mod equivariant;
pub mod error;
pub mod local_galois;
pub mod parabolic;
pub mod pvect_ops;

pub use error::{OrbiparError, Result};
