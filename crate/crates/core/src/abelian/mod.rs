//! Exact integer linear algebra and finitely generated abelian groups.

mod complex;
mod group;
mod matrix;
mod snf;

pub use complex::{preimage, AbComplex, HomologyPresentation};
pub use group::{AbHom, Element, FinAbGroup, InvariantFactors};
pub use matrix::IntegerMatrix;
pub use snf::{integer_kernel, modular_kernel, smith_decomposition, smith_normal_form, solve_integer, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("degree {degree} out of range for a complex of length {len}")]
    DegreeOutOfRange { degree: usize, len: usize },
    #[error("d∘d is nonzero at degree {0}")]
    NotAComplex(usize),
}
