//! Morita invariance along cover groupoids: `H^n(G, A)` against
//! `H^n(G[U], canon*A)`, plus the induced map between them.

use std::collections::HashSet;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::abelian::{IntegerMatrix, InvariantFactors};
use crate::budget::Budget;
use crate::classify::{ext_classes, ClassifyError};
use crate::cohomology::{Cochain, CohomologyError, GroupoidComplex};
use crate::gmodule::{pullback_module, GModule, ModuleError};
use crate::groupoid::{
    cover_groupoid, nerve, nerve_size, CoverGroupoid, FiniteGroupoid, GroupoidError, GroupoidMorphism, NerveTuple,
    ObjectCover,
};
use crate::par::{self, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoritaError {
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

impl MoritaError {
    pub fn is_budget(&self) -> bool {
        match self {
            MoritaError::Cohomology(e) | MoritaError::Classify(ClassifyError::Cohomology(e)) => e.is_budget(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub base: InvariantFactors,
    pub cover: InvariantFactors,
    /// Whether `canon*` maps `H^n(G, A)` onto `H^n(G[U], canon*A)`.
    pub induced_iso: bool,
}

impl DegreeComparison {
    pub fn holds(&self) -> bool {
        self.base == self.cover && self.induced_iso
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtComparison {
    pub base_classes: usize,
    pub cover_classes: usize,
    pub base_h2: InvariantFactors,
    pub cover_h2: InvariantFactors,
    /// Pulled-back extension classes are pairwise distinct.
    pub pullback_injective: bool,
}

impl ExtComparison {
    pub fn holds(&self) -> bool {
        self.base_classes == self.cover_classes && self.base_h2 == self.cover_h2 && self.pullback_injective
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoritaReport {
    pub cover_objects: usize,
    pub cover_arrows: usize,
    pub degrees: Vec<DegreeComparison>,
    /// Only for finite coefficients.
    pub ext: Option<ExtComparison>,
}

impl MoritaReport {
    pub fn holds(&self) -> bool {
        self.degrees.iter().all(DegreeComparison::holds) && self.ext.as_ref().is_none_or(ExtComparison::holds)
    }
}

/// `c ∘ canon`: the same values, read through the canonical morphism.
pub fn pullback_cochain(f: &GroupoidMorphism, from: &FiniteGroupoid, pulled: &GModule, c: &Cochain) -> Cochain {
    Cochain::from_fn(pulled, c.degree(), |t| match t {
        NerveTuple::Object(x) => c.at_object(f.object_map[*x]).clone(),
        NerveTuple::Arrows(a) => {
            let image: Vec<usize> = a.iter().map(|&g| f.arrow_map[g]).collect();
            debug_assert!(a.iter().all(|&g| g < from.n_arrows()));
            c.at(&image).clone()
        }
    })
}

/// Surjectivity of the map on cohomology given by images of generators.
fn induced_is_iso(base: &GroupoidComplex, cover: &GroupoidComplex, f: &GroupoidMorphism, n: usize) -> Result<bool, MoritaError> {
    let pb = base.presentation(n)?;
    let pc = cover.presentation(n)?;
    if pb.factors != pc.factors {
        return Ok(false);
    }
    let k = pc.generators().len();
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for gen in pb.generators() {
        let c = base.unflatten(n, gen);
        let image = pullback_cochain(f, cover.module().base(), cover.module(), &c);
        match cover.class_of(&image)? {
            Some(coords) => columns.push(coords),
            None => return Ok(false),
        }
    }
    for (j, d) in pc.generator_orders().iter().enumerate() {
        let mut col = vec![BigInt::from(0); k];
        col[j] = d.clone();
        columns.push(col);
    }
    let relations = IntegerMatrix::from_columns(k, &columns);
    // equal finitely generated groups: onto implies bijective
    Ok(InvariantFactors::from_relations(&relations, k).is_trivial())
}

/// Compares `H^n(G, A)` with `H^n(G[U], canon*A)` for each requested degree.
pub fn morita_compare(
    a: &GModule,
    u: &ObjectCover,
    degrees: &[usize],
    budget: &Budget,
    strategy: Strategy,
) -> Result<MoritaReport, MoritaError> {
    let cg = cover_groupoid(a.base(), u)?;
    let pulled = pullback_module(&cg.canon, &cg.groupoid, a)?;
    let top = degrees.iter().copied().max().unwrap_or(0);
    let (base, cover) = par::join(
        strategy,
        || GroupoidComplex::with_options(a, top, budget, strategy),
        || GroupoidComplex::with_options(&pulled, top, budget, strategy),
    );
    let (base, cover) = (base?, cover?);
    let mut out = Vec::with_capacity(degrees.len());
    for &n in degrees {
        out.push(DegreeComparison {
            degree: n,
            base: base.cohomology(n)?,
            cover: cover.cohomology(n)?,
            induced_iso: induced_is_iso(&base, &cover, &cg.canon, n)?,
        });
    }
    let ext = if a.is_finite() { Some(compare_ext(a, &pulled, &cg)?) } else { None };
    Ok(MoritaReport {
        cover_objects: cg.groupoid.n_objects(),
        cover_arrows: cg.groupoid.n_arrows(),
        degrees: out,
        ext,
    })
}

fn compare_ext(a: &GModule, pulled: &GModule, cg: &CoverGroupoid) -> Result<ExtComparison, MoritaError> {
    let eb = ext_classes(a)?;
    let ec = ext_classes(pulled)?;
    let mut seen = HashSet::new();
    let mut injective = true;
    for class in &eb.classes {
        let image = pullback_cochain(&cg.canon, &cg.groupoid, pulled, &class.cocycle);
        match ec.complex().class_of(&image)? {
            Some(coords) => injective &= seen.insert(coords),
            None => injective = false,
        }
    }
    Ok(ExtComparison {
        base_classes: eb.classes.len(),
        cover_classes: ec.classes.len(),
        base_h2: eb.h2.clone(),
        cover_h2: ec.h2.clone(),
        pullback_injective: injective,
    })
}

/// `G[U]_n` as tuples `(i0..in; g1..gn)` with `r(g1) ∈ U_i0` and
/// `s(gk) ∈ U_ik`; at level 0 the pairs `(i, x)` with `x ∈ U_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverNerveStructure {
    pub level: usize,
    pub tuples: Vec<(Vec<usize>, Vec<usize>)>,
    pub nerve_count: u128,
    /// Every tuple is a distinct composable string of `G[U]` and the counts agree.
    pub consistent: bool,
}

pub fn cover_nerve_structure(g: &FiniteGroupoid, u: &ObjectCover, n: usize) -> Result<CoverNerveStructure, MoritaError> {
    let cg = cover_groupoid(g, u)?;
    let mut tuples = Vec::new();
    if n == 0 {
        for i in 0..u.len() {
            for &x in &u.sets()[i] {
                tuples.push((vec![i], vec![x]));
            }
        }
    } else {
        for t in nerve(g, n) {
            let verts = t.vertices(g);
            let mut idx: Vec<Vec<usize>> = vec![Vec::new()];
            for &x in &verts {
                idx = idx
                    .into_iter()
                    .flat_map(|p| {
                        (0..u.len()).filter(|&i| u.contains(i, x)).map(move |i| {
                            let mut q = p.clone();
                            q.push(i);
                            q
                        })
                    })
                    .collect();
            }
            for is in idx {
                tuples.push((is, t.arrows().to_vec()));
            }
        }
    }
    let nerve_count = nerve_size(&cg.groupoid, n);
    let mut seen = HashSet::new();
    let obj_index = |p: (usize, usize)| cg.objects.iter().position(|&q| q == p);
    let arr_index = |p: (usize, usize, usize)| cg.arrows.iter().position(|&q| q == p);
    let mut consistent = tuples.len() as u128 == nerve_count;
    for (is, gs) in &tuples {
        let t = if n == 0 {
            obj_index((is[0], gs[0])).map(NerveTuple::Object)
        } else {
            (0..n)
                .map(|k| arr_index((is[k], gs[k], is[k + 1])))
                .collect::<Option<Vec<usize>>>()
                .map(NerveTuple::Arrows)
        };
        match t {
            Some(t) if t.is_composable(&cg.groupoid) => consistent &= seen.insert(t),
            _ => consistent = false,
        }
    }
    Ok(CoverNerveStructure {
        level: n,
        tuples,
        nerve_count,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FinAbGroup;
    use crate::gmodule::constant_module;
    use crate::groupoid::{cyclic_group, pair_groupoid};
    use crate::random::{random_covering_sets, random_groupoid, random_module};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn compare(a: &GModule, u: &ObjectCover) -> MoritaReport {
        morita_compare(a, u, &[0, 1, 2], &Budget::default(), Strategy::default()).unwrap()
    }

    #[test]
    fn trivial_cover_agrees() {
        let a = constant_module(&cyclic_group(3), &FinAbGroup::integers());
        let r = compare(&a, &ObjectCover::trivial(a.base()));
        assert!(r.holds());
        assert_eq!(r.degrees[2].base, InvariantFactors::from_torsion(&[3], 0));
        assert!(r.ext.is_none());
    }

    #[test]
    fn doubled_point_on_c2() {
        let a = constant_module(&cyclic_group(2), &FinAbGroup::cyclic(2));
        let r = compare(&a, &ObjectCover::new(vec![vec![0], vec![0]]));
        assert_eq!(r.cover_arrows, 8);
        for d in &r.degrees {
            assert_eq!(d.cover, InvariantFactors::from_torsion(&[2], 0));
        }
        assert!(r.holds());
        assert_eq!(r.ext.unwrap().cover_classes, 2);
    }

    #[test]
    fn partition_of_pair_groupoid() {
        let a = constant_module(&pair_groupoid(2), &FinAbGroup::cyclic(4));
        let r = compare(&a, &ObjectCover::partition(a.base()));
        assert!(r.holds());
        assert!(r.degrees[1].cover.is_trivial() && r.degrees[2].cover.is_trivial());
    }

    #[test]
    fn random_covers() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..12 {
            let g = random_groupoid(&mut rng, 4);
            let a = random_module(&mut rng, &g, true);
            let u = ObjectCover::new(random_covering_sets(&mut rng, g.n_objects(), 2));
            let r = compare(&a, &u);
            assert!(r.holds(), "case {case}: {r:?}");
        }
    }

    #[test]
    fn nerve_presentation_counts() {
        let c2 = cyclic_group(2);
        let doubled = ObjectCover::new(vec![vec![0], vec![0]]);
        let s0 = cover_nerve_structure(&c2, &doubled, 0).unwrap();
        assert_eq!(s0.tuples, vec![(vec![0], vec![0]), (vec![1], vec![0])]);
        let s1 = cover_nerve_structure(&c2, &doubled, 1).unwrap();
        assert_eq!(s1.tuples.len(), 8);
        assert!(s1.consistent);
        let p = pair_groupoid(3);
        for n in 0..=3 {
            let s = cover_nerve_structure(&p, &ObjectCover::trivial(&p), n).unwrap();
            assert_eq!(s.nerve_count, nerve_size(&p, n));
            assert!(s.consistent);
        }
        let s = cover_nerve_structure(&p, &ObjectCover::new(vec![vec![0, 1], vec![1, 2]]), 2).unwrap();
        assert!(s.consistent);
    }
}
