//! Degree one and two classes made concrete: equivariant torsors and
//! groupoid extensions, with the Baer group law.

mod covered;
mod extension;
pub(crate) mod search;
mod torsor;

pub use covered::{
    check_covered_cocycle, coherent_covered_data, covered_extension, verify_psi_coherence, ArrowCover,
    CoveredCocycleData, PsiFailure, PsiReport,
};
pub use extension::{
    are_equivalent, baer_sum, cocycle_from_extension, ext_classes, extension_from_cocycle, extension_inverse,
    is_strictly_trivial, section_from_coboundary, strictly_trivial_extension, validate_extension, ExtClass,
    ExtClasses, Extension, StrictTriviality,
};
pub use torsor::{cocycle_from_torsor, equivariant_section, is_torsor_isomorphism, torsor_from_cocycle, EquivariantTorsor};

use thiserror::Error;

use crate::cohomology::CohomologyError;
use crate::groupoid::GroupoidError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("fiber over object {0} is infinite; use cohomology instead")]
    InfiniteFiber(usize),
    #[error("base data differ: {0}")]
    Mismatch(String),
    #[error("section value over arrow {0} is not a lift")]
    NotALift(usize),
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("invalid torsor: {0}")]
    InvalidTorsor(String),
    #[error("invalid covered data: {0}")]
    InvalidCover(String),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

fn require_finite(a: &crate::gmodule::GModule) -> Result<(), ClassifyError> {
    match a.base().objects().find(|&x| !a.fiber(x).is_finite()) {
        Some(x) => Err(ClassifyError::InfiniteFiber(x)),
        None => Ok(()),
    }
}

fn element_name(a: &[i64]) -> String {
    match a {
        [v] => v.to_string(),
        _ => format!("({})", a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")),
    }
}
