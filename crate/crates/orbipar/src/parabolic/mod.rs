//! Local parabolic data, glued equivariant bundles on cover scenes and the
//! functors between them.

pub mod corpus;
pub mod datum;
pub mod functors;
pub mod glued;
pub mod morphism;
pub mod scene;

pub use corpus::{random_datum, sign_twist, t_power};
pub use datum::{
    laurent_scalar, validate_parabolic, validate_point, ParabolicDatum, ParabolicIssue,
    ParabolicReport, PointDatum, PointReport,
};
pub use functors::{
    functor_s, functor_t, multipoint_map, roundtrip_check, roundtrip_point, s_point, t_point,
    MultipointReport, RoundTrip, RoundTripPoint, SChoice,
};
pub use glued::{verify_gluing, GluedBundle, GluedPoint, GluingIssue};
pub use morphism::{
    find_parabolic_isomorphism, find_point_isomorphism, validate_parabolic_morphism, IsoSearch,
    MorphismReport, PointIso, PointMorphism,
};
pub use scene::{CoverScene, ScenePoint};
