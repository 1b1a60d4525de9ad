//! Čech cohomology of finite simplicial sets through semi-simplicial
//! covers: the σ-cover `σU` indexed by `Λ_n`, its cochain complex,
//! refinement maps and the explicit homotopy operators.
//!
//! Everything is finite and discrete, so any subset is open and sections
//! over a set are plain functions on its points.

mod complex;
mod constant;
mod cover;
mod homotopy;
mod space;

pub use complex::{cech_cohomology_on_cover, refinement_map, ss_differential, CechComplex, SSCochain};
pub use constant::{constant_space_comparison, ConstantComparison, ConstantSpaceMaps, OrdinaryCech};
pub use cover::{sigma_cover, subsets, Cover, Refinement, SigmaCover, SigmaLevel};
pub use homotopy::{
    product_cover, random_coarsening, random_homotopy_setup, FineCover, HomotopyCheck, HomotopySetup,
};
pub use space::{FiniteSimplicialSpace, PointSet};

use thiserror::Error;

use crate::abelian::AbelianError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CechError {
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("invalid refinement: {0}")]
    InvalidRefinement(String),
    #[error("missing index structure: {0}")]
    MissingStructure(String),
    #[error("σ-cover level {level} exceeds the budget of {limit} indices (unpruned |Λ| = {estimate})")]
    Budget { level: usize, estimate: u128, limit: u128 },
    #[error("Čech cochain group in degree {degree} needs {needed} generators, budget is {limit}")]
    CellBudget { degree: usize, needed: u128, limit: u128 },
    #[error("Čech differential out of degree {degree} has {needed} matrix entries, budget is {limit}")]
    MatrixBudget { degree: usize, needed: u128, limit: u128 },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("homotopy operator undefined: {0}")]
    Homotopy(String),
    #[error(transparent)]
    Abelian(AbelianError),
}

impl CechError {
    /// Whether a size limit was hit.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            CechError::Budget { .. } | CechError::CellBudget { .. } | CechError::MatrixBudget { .. }
        )
    }
}

/// `θ1* - θ0* = dH + Hd` on one cochain of the given degree.
pub fn homotopy_operator(setup: &HomotopySetup, phi: &SSCochain) -> Result<Option<SSCochain>, CechError> {
    setup.homotopy(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{FinAbGroup, InvariantFactors};
    use crate::budget::Budget;
    use crate::cohomology::cohomology;
    use crate::gmodule::constant_module;
    use crate::groupoid::{cyclic_group, pair_groupoid};
    use crate::par::Strategy;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn maximal_and_single_covers_match_groupoid_cohomology() {
        let a = constant_module(&cyclic_group(2), &FinAbGroup::cyclic(2));
        let m = FiniteSimplicialSpace::nerve(&a, 3);
        for n in 0..=2 {
            let expected = cohomology(&a, n).unwrap();
            let max = cech_cohomology_on_cover(&m, &Cover::maximal(&m, 3), n, &Budget::default()).unwrap();
            let single = cech_cohomology_on_cover(&m, &Cover::single(&m, 3), n, &Budget::default()).unwrap();
            assert_eq!(max, expected);
            assert_eq!(single, expected);
        }
    }

    #[test]
    fn partition_cover_on_two_points() {
        let m = FiniteSimplicialSpace::constant(2, FinAbGroup::integers(), 3);
        let part = vec![PointSet::from_points(2, [0]), PointSet::from_points(2, [1])];
        let u = product_cover(&m, &part, 3).unwrap();
        let cx = CechComplex::new(&m, &u, 2, &Budget::default(), Strategy::Sequential).unwrap();
        assert_eq!(cx.cohomology(0).unwrap(), InvariantFactors::from_torsion(&[], 2));
        assert!(cx.cohomology(1).unwrap().is_trivial());
        assert!(cx.cohomology(2).unwrap().is_trivial());
    }

    #[test]
    fn d_squared_vanishes_on_sigma_complexes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = constant_module(&pair_groupoid(2), &FinAbGroup::cyclic(3));
        let m = FiniteSimplicialSpace::nerve(&a, 3);
        let fine = Cover::maximal(&m, 3);
        let (u, _, _) = random_coarsening(&mut rng, &m, &fine, 3).unwrap();
        let s = sigma_cover(&m, &u, 3, &Budget::default(), Strategy::Sequential).unwrap();
        for n in 0..=1 {
            let c = SSCochain::from_fn(&m, &s, n, |l, x| vec![(l * 7 + x * 3) as i64]);
            let dd = ss_differential(&m, &s, &ss_differential(&m, &s, &c).unwrap()).unwrap();
            assert!(dd.is_zero());
        }
    }

    #[test]
    fn degree_zero_cocycle_condition() {
        // (dc)_(λ0 λ1 λ01) = ε̃1* c_λ1 - ε̃0* c_λ0 up to transport
        let a = constant_module(&cyclic_group(2), &FinAbGroup::cyclic(2));
        let m = FiniteSimplicialSpace::nerve(&a, 1);
        let u = Cover::single(&m, 1);
        let s = sigma_cover(&m, &u, 1, &Budget::default(), Strategy::Sequential).unwrap();
        let c = SSCochain::from_fn(&m, &s, 0, |_, _| vec![1]);
        let dc = ss_differential(&m, &s, &c).unwrap();
        assert!(dc.is_zero());
    }

    #[test]
    fn missing_degeneracies_are_rejected() {
        let m = FiniteSimplicialSpace::constant(2, FinAbGroup::cyclic(2), 2);
        let part = |_| vec![PointSet::from_points(2, [0]), PointSet::from_points(2, [1])];
        let fine = Cover::new(&m, (0..=2).map(part).collect()).unwrap();
        let coarse = Cover::single(&m, 2);
        let theta = Refinement::new(vec![vec![0, 0]; 3], &fine, &coarse).unwrap();
        let err = HomotopySetup::new(m, coarse, fine, theta.clone(), theta, 1, &Budget::default()).unwrap_err();
        assert!(matches!(err, CechError::MissingStructure(_)));
    }

    #[test]
    fn coarse_to_maximal_is_an_isomorphism_on_h2() {
        let a = constant_module(&cyclic_group(2), &FinAbGroup::cyclic(2));
        let m = FiniteSimplicialSpace::nerve(&a, 3);
        let fine = Cover::maximal(&m, 3);
        let coarse = Cover::single(&m, 3);
        let theta = Refinement::new((0..=3).map(|n| vec![0; m.level_size(n)]).collect(), &fine, &coarse).unwrap();
        let cu = CechComplex::new(&m, &coarse, 2, &Budget::default(), Strategy::Sequential).unwrap();
        let cv = CechComplex::new(&m, &fine, 2, &Budget::default(), Strategy::Sequential).unwrap();
        let pu = cu.complex().presentation(2).unwrap();
        let pv = cv.complex().presentation(2).unwrap();
        assert_eq!(pu.factors, pv.factors);
        // the generator maps to a class of full order
        let phi = cu.unflatten(&m, 2, &pu.generators()[0]);
        let image = refinement_map(&theta, &m, cu.sigma(), cv.sigma(), &phi).unwrap();
        let class = pv.class_of(&image.flatten()).unwrap();
        assert!(class.iter().any(|c| c != &num_bigint::BigInt::from(0)));
    }
}
