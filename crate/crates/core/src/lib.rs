//! Exact computations with Lie algebras over noncommutative coefficient rings.

pub mod coeffalg;
pub mod commfilt;
pub mod current;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod pairs;
pub mod report;
pub mod scalar;
pub mod subspace;
pub mod suites;

pub use coeffalg::{AlgElement, Algebra};
pub use error::{Error, Result};
pub use subspace::{GradedSubspace, Grading};
