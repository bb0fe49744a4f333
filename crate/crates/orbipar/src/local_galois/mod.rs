//! Finite groups acting on `k[[s]]` by substitution automorphisms: the local
//! model of a totally ramified Galois extension of `k((t))`.

pub mod embedding;
pub mod extension;
pub mod group;

pub use embedding::ExtensionEmbedding;
pub use extension::{
    make_artin_schreier, make_inert, make_kummer, ExtensionFailure, ExtensionKind, LocalExtension,
    SubstAut,
};
pub use group::FiniteGroup;
