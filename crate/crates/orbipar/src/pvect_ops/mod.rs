//! Operations on parabolic data: refinement pullback and equivalence,
//! tensor and dual, local pushforward with its adjunction, and tame weights.

pub mod calculus;
pub mod pushforward;
pub mod refine;
pub mod weights;

pub use calculus::{dual, dual_pairing_check, tensor, PairingReport};
pub use pushforward::{
    adjunction_check, fixed_dim, invariant_rank, projection_formula_check, pushforward_local,
    restrict_scalars, AdjunctionReport, Pushforward,
};
pub use refine::{
    equiv_check, glued_pullback, pullback_refine, tower_compatibility, EquivReport, EquivStatus,
    RefinementMap, RefinementTarget, TowerPoint,
};
pub use weights::{extract_weights, Weights};
