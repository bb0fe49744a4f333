//! Exact arithmetic: finite fields, truncated power and Laurent series,
//! matrices over them, and linear solving over the base field.

pub mod field;
pub mod laurent;
pub mod linsolve;
pub mod matrix;
pub mod series;
pub mod smith;

pub use field::{Field, FieldSpec};
pub use laurent::Laurent;
pub use linsolve::{kernel, linearize, solve_linear, KMat, Solution};
pub use matrix::{LMat, Matrix, SMat};
pub use series::Series;
pub use smith::{smith_form, Smith};
