//! Finite groupoids, their nerves and cover groupoids.
//!
//! Objects and arrows are interned as dense integer ids. Composition follows
//! the convention `gh` defined iff `s(g) = r(h)`, with `r` the range (target)
//! and `s` the source.

mod builders;
mod cover;
mod monotone;
mod nerve;

pub use builders::{action_groupoid, cyclic_group, disjoint_union, pair_groupoid, product, unit_groupoid, GSet};
pub use cover::{cover_groupoid, CoverGroupoid, ObjectCover};
pub use monotone::MonotoneMap;
pub use nerve::{check_simplicial_identities, degeneracy, face, IdentityReport, nerve, nerve_size, simplicial_map, Nerve, NerveTuple};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("structural error: {0}")]
    Structure(String),
    #[error("index {index} out of range (level {level})")]
    IndexOutOfRange { level: usize, index: usize },
    #[error("level mismatch: expected {expected}, got {got}")]
    LevelMismatch { expected: usize, got: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("cover does not contain object {0}")]
    NotACover(usize),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
}

/// A finite groupoid given by complete tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    n_objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    /// `comp[g * n + h]` is `gh` when `s(g) = r(h)`.
    comp: Vec<Option<usize>>,
    object_names: Vec<String>,
    arrow_names: Vec<String>,
}

/// Raw tables for [`FiniteGroupoid::from_tables`].
#[derive(Clone, Debug, Default)]
pub struct GroupoidTables {
    pub n_objects: usize,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub unit: Vec<usize>,
    /// Composite for every pair with `s(g) = r(h)`, indexed `g * arrows + h`.
    pub comp: Vec<Option<usize>>,
    /// Inverses; derived from `comp` when absent.
    pub inv: Option<Vec<usize>>,
    pub object_names: Option<Vec<String>>,
    pub arrow_names: Option<Vec<String>>,
}

/// One failed groupoid identity with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomFailure {
    RangeOfProduct { g: usize, h: usize },
    SourceOfProduct { g: usize, h: usize },
    Associativity { g: usize, h: usize, k: usize },
    UnitEndpoints { object: usize },
    LeftUnit { g: usize },
    RightUnit { g: usize },
    Inverse { g: usize },
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomFailure::RangeOfProduct { g, h } => write!(f, "r(gh) != r(g) for g={g}, h={h}"),
            AxiomFailure::SourceOfProduct { g, h } => write!(f, "s(gh) != s(h) for g={g}, h={h}"),
            AxiomFailure::Associativity { g, h, k } => {
                write!(f, "(gh)k != g(hk) for g={g}, h={h}, k={k}")
            }
            AxiomFailure::UnitEndpoints { object } => {
                write!(f, "unit of object {object} is not a loop at it")
            }
            AxiomFailure::LeftUnit { g } => write!(f, "unit(r(g)) g != g for g={g}"),
            AxiomFailure::RightUnit { g } => write!(f, "g unit(s(g)) != g for g={g}"),
            AxiomFailure::Inverse { g } => write!(f, "inverse laws fail for g={g}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<AxiomFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl FiniteGroupoid {
    /// Structural checks only: ids in range and composites present exactly
    /// on composable pairs. Axioms are checked by [`FiniteGroupoid::validate`].
    pub fn from_tables(t: GroupoidTables) -> Result<Self, GroupoidError> {
        let n = t.src.len();
        let structure = |msg: String| Err(GroupoidError::Structure(msg));
        if t.tgt.len() != n {
            return structure(format!("{} sources but {} targets", n, t.tgt.len()));
        }
        if t.unit.len() != t.n_objects {
            return structure(format!("{} units for {} objects", t.unit.len(), t.n_objects));
        }
        if t.comp.len() != n * n {
            return structure(format!("composition table has {} entries, expected {}", t.comp.len(), n * n));
        }
        for (g, (&s, &r)) in t.src.iter().zip(&t.tgt).enumerate() {
            if s >= t.n_objects || r >= t.n_objects {
                return structure(format!("arrow {g} references a missing object"));
            }
        }
        for (x, &u) in t.unit.iter().enumerate() {
            if u >= n {
                return structure(format!("unit of object {x} is a missing arrow"));
            }
        }
        for g in 0..n {
            for h in 0..n {
                let composable = t.src[g] == t.tgt[h];
                match t.comp[g * n + h] {
                    Some(k) if k >= n => {
                        return structure(format!("composite of {g} and {h} is a missing arrow {k}"))
                    }
                    Some(_) if !composable => {
                        return structure(format!("composite given for non-composable pair ({g}, {h})"))
                    }
                    None if composable => {
                        return structure(format!("composite missing for composable pair ({g}, {h})"))
                    }
                    _ => {}
                }
            }
        }
        let inv = match t.inv {
            Some(inv) => {
                if inv.len() != n || inv.iter().any(|&i| i >= n) {
                    return structure("inverse table has wrong shape".into());
                }
                inv
            }
            None => (0..n)
                .map(|g| {
                    (0..n)
                        .find(|&h| {
                            t.src[g] == t.tgt[h]
                                && t.comp[g * n + h] == Some(t.unit[t.tgt[g]])
                                && t.comp[h * n + g] == Some(t.unit[t.src[g]])
                        })
                        .unwrap_or(g)
                })
                .collect(),
        };
        let object_names = t
            .object_names
            .unwrap_or_else(|| (0..t.n_objects).map(|x| x.to_string()).collect());
        let arrow_names = t
            .arrow_names
            .unwrap_or_else(|| (0..n).map(|g| format!("g{g}")).collect());
        if object_names.len() != t.n_objects || arrow_names.len() != n {
            return structure("name tables have wrong length".into());
        }
        Ok(FiniteGroupoid {
            n_objects: t.n_objects,
            src: t.src,
            tgt: t.tgt,
            unit: t.unit,
            inv,
            comp: t.comp,
            object_names,
            arrow_names,
        })
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn n_arrows(&self) -> usize {
        self.src.len()
    }

    pub fn objects(&self) -> std::ops::Range<usize> {
        0..self.n_objects
    }

    pub fn arrows(&self) -> std::ops::Range<usize> {
        0..self.src.len()
    }

    pub fn source(&self, g: usize) -> usize {
        self.src[g]
    }

    /// Range map `r`.
    pub fn range(&self, g: usize) -> usize {
        self.tgt[g]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.unit[self.src[g]] == g && self.src[g] == self.tgt[g]
    }

    pub fn composable(&self, g: usize, h: usize) -> bool {
        self.src[g] == self.tgt[h]
    }

    pub fn try_compose(&self, g: usize, h: usize) -> Option<usize> {
        self.comp[g * self.n_arrows() + h]
    }

    /// `gh`; panics unless `s(g) = r(h)`.
    pub fn compose(&self, g: usize, h: usize) -> usize {
        self.try_compose(g, h)
            .unwrap_or_else(|| panic!("arrows {g} and {h} are not composable"))
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.object_names[x]
    }

    pub fn arrow_name(&self, g: usize) -> &str {
        &self.arrow_names[g]
    }

    pub fn object_names(&self) -> &[String] {
        &self.object_names
    }

    pub fn arrow_names(&self) -> &[String] {
        &self.arrow_names
    }

    pub fn with_names(mut self, objects: Vec<String>, arrows: Vec<String>) -> Self {
        assert_eq!(objects.len(), self.n_objects);
        assert_eq!(arrows.len(), self.n_arrows());
        self.object_names = objects;
        self.arrow_names = arrows;
        self
    }

    /// Arrows `g` with `s(g) = x`.
    pub fn arrows_from(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows().filter(move |&g| self.src[g] == x)
    }

    /// Arrows `g` with `r(g) = x`.
    pub fn arrows_into(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows().filter(move |&g| self.tgt[g] == x)
    }

    /// Exhaustive check of the groupoid axioms.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let n = self.n_arrows();
        for x in self.objects() {
            let u = self.unit[x];
            if self.src[u] != x || self.tgt[u] != x {
                failures.push(AxiomFailure::UnitEndpoints { object: x });
            }
        }
        for g in 0..n {
            for h in 0..n {
                let Some(gh) = self.try_compose(g, h) else { continue };
                if self.tgt[gh] != self.tgt[g] {
                    failures.push(AxiomFailure::RangeOfProduct { g, h });
                }
                if self.src[gh] != self.src[h] {
                    failures.push(AxiomFailure::SourceOfProduct { g, h });
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                let Some(gh) = self.try_compose(g, h) else { continue };
                for k in 0..n {
                    let Some(hk) = self.try_compose(h, k) else { continue };
                    if self.try_compose(gh, k) != self.try_compose(g, hk) {
                        failures.push(AxiomFailure::Associativity { g, h, k });
                    }
                }
            }
        }
        for g in 0..n {
            if self.try_compose(self.unit[self.tgt[g]], g) != Some(g) {
                failures.push(AxiomFailure::LeftUnit { g });
            }
            if self.try_compose(g, self.unit[self.src[g]]) != Some(g) {
                failures.push(AxiomFailure::RightUnit { g });
            }
            let i = self.inv[g];
            if self.try_compose(g, i) != Some(self.unit[self.tgt[g]])
                || self.try_compose(i, g) != Some(self.unit[self.src[g]])
            {
                failures.push(AxiomFailure::Inverse { g });
            }
        }
        ValidationReport { failures }
    }

    /// Composition table as rows of optional composites.
    pub fn composition_table(&self) -> &[Option<usize>] {
        &self.comp
    }

    /// Replaces one composition entry without any checks (for tests).
    #[doc(hidden)]
    pub fn corrupt_composition(&mut self, g: usize, h: usize, value: usize) {
        let n = self.n_arrows();
        self.comp[g * n + h] = Some(value);
    }

    pub fn tables(&self) -> GroupoidTables {
        GroupoidTables {
            n_objects: self.n_objects,
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            unit: self.unit.clone(),
            comp: self.comp.clone(),
            inv: Some(self.inv.clone()),
            object_names: Some(self.object_names.clone()),
            arrow_names: Some(self.arrow_names.clone()),
        }
    }
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroupoid")
            .field("objects", &self.object_names)
            .field("arrows", &self.arrow_names)
            .finish()
    }
}

/// A functor between finite groupoids given on objects and arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidMorphism {
    pub object_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl GroupoidMorphism {
    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidMorphism {
            object_map: g.objects().collect(),
            arrow_map: g.arrows().collect(),
        }
    }

    /// Checks that the maps preserve source, range, units and composition.
    pub fn check(&self, from: &FiniteGroupoid, to: &FiniteGroupoid) -> Result<(), GroupoidError> {
        let bad = |m: String| Err(GroupoidError::NotAMorphism(m));
        if self.object_map.len() != from.n_objects() || self.arrow_map.len() != from.n_arrows() {
            return bad("map tables have wrong length".into());
        }
        if self.object_map.iter().any(|&y| y >= to.n_objects())
            || self.arrow_map.iter().any(|&a| a >= to.n_arrows())
        {
            return bad("image outside the target".into());
        }
        for g in from.arrows() {
            let fg = self.arrow_map[g];
            if to.source(fg) != self.object_map[from.source(g)]
                || to.range(fg) != self.object_map[from.range(g)]
            {
                return bad(format!("arrow {g} endpoints not preserved"));
            }
        }
        for x in from.objects() {
            if self.arrow_map[from.unit(x)] != to.unit(self.object_map[x]) {
                return bad(format!("unit of object {x} not preserved"));
            }
        }
        for g in from.arrows() {
            for h in from.arrows() {
                if let Some(gh) = from.try_compose(g, h) {
                    if to.try_compose(self.arrow_map[g], self.arrow_map[h]) != Some(self.arrow_map[gh]) {
                        return bad(format!("composite of {g} and {h} not preserved"));
                    }
                }
            }
        }
        Ok(())
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &GroupoidMorphism) -> GroupoidMorphism {
        GroupoidMorphism {
            object_map: first.object_map.iter().map(|&x| self.object_map[x]).collect(),
            arrow_map: first.arrow_map.iter().map(|&g| self.arrow_map[g]).collect(),
        }
    }

    pub fn is_bijective(&self, to: &FiniteGroupoid) -> bool {
        let bij = |m: &[usize], n: usize| {
            let mut seen = vec![false; n];
            m.len() == n && m.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
        };
        bij(&self.object_map, to.n_objects()) && bij(&self.arrow_map, to.n_arrows())
    }

    pub fn inverse(&self) -> GroupoidMorphism {
        let mut objects = vec![0; self.object_map.len()];
        for (x, &y) in self.object_map.iter().enumerate() {
            objects[y] = x;
        }
        let mut arrows = vec![0; self.arrow_map.len()];
        for (g, &h) in self.arrow_map.iter().enumerate() {
            arrows[h] = g;
        }
        GroupoidMorphism {
            object_map: objects,
            arrow_map: arrows,
        }
    }
}

/// Exhaustive isomorphism search between small groupoids.
pub fn find_isomorphism(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Option<GroupoidMorphism> {
    if a.n_objects() != b.n_objects() || a.n_arrows() != b.n_arrows() {
        return None;
    }
    let mut objects = vec![usize::MAX; a.n_objects()];
    let mut used_objects = vec![false; b.n_objects()];
    search_objects(a, b, 0, &mut objects, &mut used_objects)
}

fn search_objects(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
    x: usize,
    objects: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> Option<GroupoidMorphism> {
    if x == a.n_objects() {
        let mut arrows = vec![usize::MAX; a.n_arrows()];
        let mut used_arrows = vec![false; b.n_arrows()];
        for y in a.objects() {
            arrows[a.unit(y)] = b.unit(objects[y]);
            used_arrows[b.unit(objects[y])] = true;
        }
        let order: Vec<usize> = a.arrows().filter(|&g| !a.is_unit(g)).collect();
        return search_arrows(a, b, &order, 0, objects, &mut arrows, &mut used_arrows);
    }
    for y in b.objects() {
        if used[y]
            || a.arrows_from(x).count() != b.arrows_from(y).count()
            || a.arrows_into(x).count() != b.arrows_into(y).count()
        {
            continue;
        }
        used[y] = true;
        objects[x] = y;
        if let Some(m) = search_objects(a, b, x + 1, objects, used) {
            return Some(m);
        }
        used[y] = false;
    }
    None
}

fn search_arrows(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
    order: &[usize],
    pos: usize,
    objects: &[usize],
    arrows: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> Option<GroupoidMorphism> {
    if pos == order.len() {
        let m = GroupoidMorphism {
            object_map: objects.to_vec(),
            arrow_map: arrows.clone(),
        };
        return m.check(a, b).is_ok().then_some(m);
    }
    let g = order[pos];
    let (s, r) = (objects[a.source(g)], objects[a.range(g)]);
    for h in b.arrows() {
        if used[h] || b.source(h) != s || b.range(h) != r {
            continue;
        }
        arrows[g] = h;
        // prune on composites among assigned arrows
        let consistent = a.arrows().filter(|&p| arrows[p] != usize::MAX).all(|p| {
            [(g, p), (p, g)].iter().all(|&(u, v)| match a.try_compose(u, v) {
                Some(uv) if arrows[uv] != usize::MAX => {
                    b.try_compose(arrows[u], arrows[v]) == Some(arrows[uv])
                }
                _ => true,
            })
        });
        if consistent {
            used[h] = true;
            if let Some(m) = search_arrows(a, b, order, pos + 1, objects, arrows, used) {
                return Some(m);
            }
            used[h] = false;
        }
        arrows[g] = usize::MAX;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_validate() {
        assert!(cyclic_group(2).validate().passed());
        assert!(unit_groupoid(3).validate().passed());
        assert!(pair_groupoid(3).validate().passed());
        let u = disjoint_union(&cyclic_group(2), &pair_groupoid(2));
        assert!(u.validate().passed());
        assert_eq!((u.n_objects(), u.n_arrows()), (3, 6));
    }

    #[test]
    fn corrupted_composition_is_reported() {
        let mut g = cyclic_group(4);
        // g1 * g1 should be g2
        g.corrupt_composition(1, 1, 3);
        let report = g.validate();
        assert!(!report.passed());
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f, AxiomFailure::Associativity { .. } | AxiomFailure::LeftUnit { .. } | AxiomFailure::RightUnit { .. })));
    }

    #[test]
    fn dangling_ids_are_structural_errors() {
        let mut t = cyclic_group(2).tables();
        t.src[1] = 5;
        assert!(matches!(FiniteGroupoid::from_tables(t), Err(GroupoidError::Structure(_))));
        let mut t = cyclic_group(2).tables();
        t.comp[3] = Some(9);
        assert!(matches!(FiniteGroupoid::from_tables(t), Err(GroupoidError::Structure(_))));
    }

    #[test]
    fn isomorphism_search() {
        let swap = GSet::new(&cyclic_group(2), vec![0, 0], vec![vec![Some(0), Some(1)], vec![Some(1), Some(0)]]).unwrap();
        let action = action_groupoid(&cyclic_group(2), &swap).unwrap();
        let iso = find_isomorphism(&action, &pair_groupoid(2)).expect("isomorphic");
        iso.check(&action, &pair_groupoid(2)).unwrap();
        assert!(find_isomorphism(&cyclic_group(4), &product(&cyclic_group(2), &cyclic_group(2))).is_none());
    }

    #[test]
    fn morphism_composition() {
        let g = pair_groupoid(2);
        let id = GroupoidMorphism::identity(&g);
        id.check(&g, &g).unwrap();
        assert_eq!(id.after(&id), id);
        assert!(id.is_bijective(&g));
    }
}
