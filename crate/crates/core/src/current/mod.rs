//! Current Lie algebras `(g, A)(F)` inside `F ⊗ A`.

pub mod closed;
pub mod saturation;
pub mod tensor;

pub use closed::{ClosedForms, Mutation};
pub use saturation::{close_from, generators, lie_closure};
pub use tensor::TensorContext;
