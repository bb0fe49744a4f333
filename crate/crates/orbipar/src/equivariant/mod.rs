//! Semilinear group actions on free modules over the local rings of a finite
//! orbit of points, their invariants and isomorphism searches.

pub mod cocycle;
pub mod invariants;
pub mod product;
pub mod random;
pub mod search;

pub use cocycle::{Cocycle, CocycleViolation};
pub use invariants::{invariants, is_induced, InducedReport, Invariants, Strand};
pub use product::{
    assemble, assemble_morphism, check_connectors, default_seeds, from_blocks,
    independence_intertwiner, make_connectors, verify_morphism, Block, OrbitData, ProductModule,
    ProductSpec,
};
pub use search::{
    find_intertwiner, hom_space, trivialize, Budget, Intertwiner, Stage, Trivialization,
};
