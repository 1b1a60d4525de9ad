//! Abelian modules over a finite groupoid: a fiber `A_x` per object and an
//! isomorphism `α_g: A_{s(g)} -> A_{r(g)}` per arrow.

use std::fmt;

use thiserror::Error;

use crate::abelian::{AbHom, Element, FinAbGroup};
use crate::groupoid::{FiniteGroupoid, GroupoidError, GroupoidMorphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("module shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleFailure {
    /// `α_g` does not respect the fiber relations.
    NotWellDefined { g: usize },
    UnitNotIdentity { object: usize },
    NotMultiplicative { g: usize, h: usize },
    NotInvertible { g: usize },
}

impl fmt::Display for ModuleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleFailure::NotWellDefined { g } => write!(f, "action of arrow {g} is not a homomorphism"),
            ModuleFailure::UnitNotIdentity { object } => {
                write!(f, "unit of object {object} does not act as the identity")
            }
            ModuleFailure::NotMultiplicative { g, h } => {
                write!(f, "α_gh != α_g α_h for g={g}, h={h}")
            }
            ModuleFailure::NotInvertible { g } => {
                write!(f, "α_g is not inverted by α_(g^-1) for g={g}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModuleReport {
    pub failures: Vec<ModuleFailure>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    base: FiniteGroupoid,
    fibers: Vec<FinAbGroup>,
    actions: Vec<AbHom>,
}

impl GModule {
    /// Shape checks only; the module axioms are checked by [`validate_module`].
    pub fn new(base: FiniteGroupoid, fibers: Vec<FinAbGroup>, actions: Vec<AbHom>) -> Result<Self, ModuleError> {
        if fibers.len() != base.n_objects() {
            return Err(ModuleError::Shape(format!(
                "{} fibers for {} objects",
                fibers.len(),
                base.n_objects()
            )));
        }
        if actions.len() != base.n_arrows() {
            return Err(ModuleError::Shape(format!(
                "{} action maps for {} arrows",
                actions.len(),
                base.n_arrows()
            )));
        }
        for g in base.arrows() {
            if actions[g].source() != &fibers[base.source(g)] || actions[g].target() != &fibers[base.range(g)] {
                return Err(ModuleError::Shape(format!(
                    "action of arrow {g} must go from A_s(g) to A_r(g)"
                )));
            }
        }
        Ok(GModule { base, fibers, actions })
    }

    pub fn base(&self) -> &FiniteGroupoid {
        &self.base
    }

    pub fn fiber(&self, x: usize) -> &FinAbGroup {
        &self.fibers[x]
    }

    pub fn fibers(&self) -> &[FinAbGroup] {
        &self.fibers
    }

    pub fn action(&self, g: usize) -> &AbHom {
        &self.actions[g]
    }

    /// `g·a` for `a ∈ A_{s(g)}`.
    pub fn act(&self, g: usize, a: &[i64]) -> Element {
        self.actions[g].apply(a)
    }

    /// True when every fiber is finite.
    pub fn is_finite(&self) -> bool {
        self.fibers.iter().all(FinAbGroup::is_finite)
    }
}

/// Exhaustive check of the module axioms over arrows and composable pairs.
pub fn validate_module(a: &GModule) -> ModuleReport {
    let g = a.base();
    let mut failures = Vec::new();
    for h in g.arrows() {
        if !a.action(h).is_well_defined() {
            failures.push(ModuleFailure::NotWellDefined { g: h });
        }
    }
    for x in g.objects() {
        if !a.action(g.unit(x)).same_map(&AbHom::identity(a.fiber(x).clone())) {
            failures.push(ModuleFailure::UnitNotIdentity { object: x });
        }
    }
    for p in g.arrows() {
        for q in g.arrows() {
            let Some(pq) = g.try_compose(p, q) else { continue };
            let composite = a.action(p).compose(a.action(q)).expect("fibers match on composable pairs");
            if !composite.same_map(a.action(pq)) {
                failures.push(ModuleFailure::NotMultiplicative { g: p, h: q });
            }
        }
    }
    for p in g.arrows() {
        let back = a.action(g.inverse(p)).compose(a.action(p)).expect("inverse has matching fibers");
        let forth = a.action(p).compose(a.action(g.inverse(p))).expect("inverse has matching fibers");
        let ident_s = AbHom::identity(a.fiber(g.source(p)).clone());
        let ident_r = AbHom::identity(a.fiber(g.range(p)).clone());
        if !back.same_map(&ident_s) || !forth.same_map(&ident_r) {
            failures.push(ModuleFailure::NotInvertible { g: p });
        }
    }
    ModuleReport { failures }
}

/// Fiber `b` everywhere, every arrow acting by the identity.
pub fn constant_module(g: &FiniteGroupoid, b: &FinAbGroup) -> GModule {
    GModule {
        base: g.clone(),
        fibers: vec![b.clone(); g.n_objects()],
        actions: vec![AbHom::identity(b.clone()); g.n_arrows()],
    }
}

/// `f*A` over `from`: fiber `A_{f(x)}`, action `α_{f(g)}`.
pub fn pullback_module(f: &GroupoidMorphism, from: &FiniteGroupoid, a: &GModule) -> Result<GModule, ModuleError> {
    f.check(from, a.base())?;
    Ok(GModule {
        base: from.clone(),
        fibers: from.objects().map(|x| a.fiber(f.object_map[x]).clone()).collect(),
        actions: from.arrows().map(|g| a.action(f.arrow_map[g]).clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::IntegerMatrix;
    use crate::groupoid::{cover_groupoid, cyclic_group, pair_groupoid, unit_groupoid, ObjectCover};

    pub(crate) fn c2_scalar(n: u64, k: i64) -> GModule {
        let c2 = cyclic_group(2);
        let b = FinAbGroup::cyclic(n);
        GModule::new(c2, vec![b.clone()], vec![AbHom::identity(b.clone()), AbHom::scalar(b, k)]).unwrap()
    }

    #[test]
    fn constant_modules_validate() {
        for (g, b) in [
            (cyclic_group(2), FinAbGroup::cyclic(2)),
            (pair_groupoid(2), FinAbGroup::integers()),
            (unit_groupoid(1), FinAbGroup::cyclic(6)),
        ] {
            assert!(validate_module(&constant_module(&g, &b)).passed());
        }
    }

    #[test]
    fn negation_on_z3() {
        assert!(validate_module(&c2_scalar(3, -1)).passed());
    }

    #[test]
    fn doubling_on_z4_fails() {
        let report = validate_module(&c2_scalar(4, 2));
        assert!(report.failures.contains(&ModuleFailure::NotMultiplicative { g: 1, h: 1 }));
        assert!(report.failures.contains(&ModuleFailure::NotInvertible { g: 1 }));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let c2 = cyclic_group(2);
        let err = GModule::new(
            c2,
            vec![FinAbGroup::cyclic(2)],
            vec![AbHom::identity(FinAbGroup::cyclic(2)), AbHom::identity(FinAbGroup::cyclic(3))],
        );
        assert!(matches!(err, Err(ModuleError::Shape(_))));
    }

    #[test]
    fn isomorphic_but_different_fibers() {
        // Z/6 and Z/2 x Z/3 over the pair groupoid, joined by the CRT isomorphism
        let p = pair_groupoid(2);
        let z6 = FinAbGroup::cyclic(6);
        let z23 = FinAbGroup::new(vec![2, 3]);
        let to = AbHom::new(z6.clone(), z23.clone(), IntegerMatrix::from_rows(&[[1], [1]])).unwrap();
        let back = AbHom::new(z23.clone(), z6.clone(), IntegerMatrix::from_rows(&[[3, 4]])).unwrap();
        // arrow r*2+s goes from s to r
        let actions = vec![AbHom::identity(z6.clone()), back, to, AbHom::identity(z23.clone())];
        let m = GModule::new(p, vec![z6, z23], actions).unwrap();
        assert!(validate_module(&m).passed());
    }

    #[test]
    fn pullback_along_cover_with_negation() {
        let m = c2_scalar(3, -1);
        let cg = cover_groupoid(m.base(), &ObjectCover::new(vec![vec![0], vec![0]])).unwrap();
        let pulled = pullback_module(&cg.canon, &cg.groupoid, &m).unwrap();
        assert!(validate_module(&pulled).passed());
        assert_eq!(pulled.base().n_arrows(), 8);
        for (k, &(_, g, _)) in cg.arrows.iter().enumerate() {
            let expected = if g == 1 { vec![2] } else { vec![1] };
            assert_eq!(pulled.act(k, &[1]), expected);
        }
    }

    #[test]
    fn pullback_along_identity_and_composites() {
        let m = c2_scalar(3, -1);
        let id = GroupoidMorphism::identity(m.base());
        assert_eq!(pullback_module(&id, m.base(), &m).unwrap(), m);

        let c1 = cover_groupoid(m.base(), &ObjectCover::new(vec![vec![0], vec![0]])).unwrap();
        let c2 = cover_groupoid(&c1.groupoid, &ObjectCover::new(vec![vec![0, 1], vec![1]])).unwrap();
        let step = pullback_module(&c2.canon, &c2.groupoid, &pullback_module(&c1.canon, &c1.groupoid, &m).unwrap()).unwrap();
        let direct = pullback_module(&c1.canon.after(&c2.canon), &c2.groupoid, &m).unwrap();
        assert_eq!(step, direct);
    }
}
