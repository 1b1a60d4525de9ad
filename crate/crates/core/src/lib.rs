//! Cohomology of finite groupoids with coefficients in abelian modules.
//!
//! The crate builds the groupoid cochain complex and computes its cohomology
//! by Smith normal form, realizes degree one and two classes as equivariant
//! torsors and extensions, implements the semi-simplicial Čech machinery on
//! finite simplicial spaces (σ-covers, refinements, homotopy operators), and
//! checks Morita invariance along cover groupoids.

pub mod abelian;
pub mod budget;
pub mod cech;
pub mod classify;
pub mod cohomology;
pub mod gmodule;
pub mod groupoid;
pub mod morita;
pub mod par;
pub mod random;

pub use abelian::{AbComplex, AbHom, Element, FinAbGroup, IntegerMatrix, InvariantFactors};
pub use budget::Budget;
pub use cohomology::{cohomology, Cochain, GroupoidComplex};
pub use gmodule::{constant_module, pullback_module, validate_module, GModule};
pub use groupoid::{FiniteGroupoid, GroupoidMorphism};
