use crate::abelian::{AbHom, Element, FinAbGroup};
use crate::gmodule::GModule;
use crate::groupoid::{degeneracy, simplicial_map, FiniteGroupoid, MonotoneMap, Nerve};

/// Finite subset of a level, stored as a bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    bits: Vec<u64>,
    universe: usize,
}

impl PointSet {
    pub fn empty(universe: usize) -> Self {
        PointSet {
            bits: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for x in 0..universe {
            s.insert(x);
        }
        s
    }

    pub fn from_points(universe: usize, points: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for x in points {
            s.insert(x);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, x: usize) {
        assert!(x < self.universe, "point {x} outside a level of size {}", self.universe);
        self.bits[x / 64] |= 1 << (x % 64);
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.universe && self.bits[x / 64] & (1 << (x % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &PointSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Position of `x` among the members, in increasing order.
    pub fn rank(&self, x: usize) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let w = x / 64;
        let below: usize = self.bits[..w].iter().map(|b| b.count_ones() as usize).sum();
        let mask = (1u64 << (x % 64)) - 1;
        Some(below + (self.bits[w] & mask).count_ones() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&x| self.contains(x))
    }
}

impl std::fmt::Debug for PointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Nerve { module: GModule, nerve: Nerve },
    Constant { points: usize, coefficients: FinAbGroup },
}

/// A simplicial set truncated at level `top`, with a coefficient system:
/// the nerve of a groupoid with a module, or a constant simplicial set
/// with a constant group.
///
/// Points of each level are numbered. Structure maps for injective `f`
/// are tabulated by the image of `f` as a bit mask.
#[derive(Clone, Debug)]
pub struct FiniteSimplicialSpace {
    kind: Kind,
    sizes: Vec<usize>,
    /// `inj[n][mask][x]` is `f̃(x)` for the injective `f` with image `mask`.
    inj: Vec<Vec<Vec<usize>>>,
    /// `degen[n][k][x]` is `η̃_k(x)`, from level `n` to `n + 1`.
    degen: Vec<Vec<Vec<usize>>>,
}

impl FiniteSimplicialSpace {
    /// The nerve of `a.base()` up to level `top`, with coefficients `a`.
    pub fn nerve(a: &GModule, top: usize) -> Self {
        let g = a.base();
        let nerve = Nerve::new(g, top);
        let sizes: Vec<usize> = (0..=top).map(|n| nerve.level(n).len()).collect();
        let inj = (0..=top)
            .map(|n| {
                (0u32..1 << (n + 1))
                    .map(|mask| {
                        if mask == 0 {
                            return Vec::new();
                        }
                        let f = MonotoneMap::from_mask(mask, n);
                        nerve
                            .level(n)
                            .iter()
                            .map(|t| {
                                let y = simplicial_map(g, &f, t).expect("level matches");
                                nerve.position(&y).expect("structure maps stay in the nerve")
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let degen = (0..top)
            .map(|n| {
                (0..=n)
                    .map(|k| {
                        nerve
                            .level(n)
                            .iter()
                            .map(|t| {
                                let y = degeneracy(g, n, k, t).expect("level matches");
                                nerve.position(&y).expect("degeneracies stay in the nerve")
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FiniteSimplicialSpace {
            kind: Kind::Nerve {
                module: a.clone(),
                nerve,
            },
            sizes,
            inj,
            degen,
        }
    }

    /// The constant simplicial set on `points` points, all structure maps
    /// the identity, with constant coefficients.
    pub fn constant(points: usize, coefficients: FinAbGroup, top: usize) -> Self {
        let id: Vec<usize> = (0..points).collect();
        FiniteSimplicialSpace {
            kind: Kind::Constant { points, coefficients },
            sizes: vec![points; top + 1],
            inj: (0..=top)
                .map(|n| {
                    (0u32..1 << (n + 1))
                        .map(|m| if m == 0 { Vec::new() } else { id.clone() })
                        .collect()
                })
                .collect(),
            degen: (0..top).map(|n| vec![id.clone(); n + 1]).collect(),
        }
    }

    pub fn top(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.sizes[n]
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, Kind::Constant { .. })
    }

    pub fn module(&self) -> Option<&GModule> {
        match &self.kind {
            Kind::Nerve { module, .. } => Some(module),
            Kind::Constant { .. } => None,
        }
    }

    pub fn groupoid(&self) -> Option<&FiniteGroupoid> {
        self.module().map(GModule::base)
    }

    /// The nerve tuples, when this is a nerve.
    pub fn nerve_data(&self) -> Option<&Nerve> {
        match &self.kind {
            Kind::Nerve { nerve, .. } => Some(nerve),
            Kind::Constant { .. } => None,
        }
    }

    /// Coefficient group at a point of level `n`.
    pub fn fiber(&self, n: usize, x: usize) -> &FinAbGroup {
        match &self.kind {
            Kind::Nerve { module, nerve } => module.fiber(nerve.level(n)[x].anchor(module.base())),
            Kind::Constant { coefficients, .. } => coefficients,
        }
    }

    /// `f̃(x)` for the injective `f` into `[n]` with image `mask`.
    pub fn apply_injective(&self, n: usize, mask: u32, x: usize) -> usize {
        self.inj[n][mask as usize][x]
    }

    pub fn apply_degeneracy(&self, n: usize, k: usize, x: usize) -> usize {
        self.degen[n][k][x]
    }

    /// Arrow whose action carries coefficients at `f̃(x)` back to `x`, for
    /// `f` with image `mask`; `None` when that is the identity.
    fn transport_arrow(&self, n: usize, mask: u32, x: usize) -> Option<usize> {
        let p = mask.trailing_zeros() as usize;
        match &self.kind {
            Kind::Nerve { module, nerve } if p > 0 => {
                let g = module.base();
                let a = nerve.level(n)[x].arrows();
                Some(a[1..p].iter().fold(a[0], |acc, &h| g.compose(acc, h)))
            }
            _ => None,
        }
    }

    /// Pulls a coefficient value at `f̃(x)` back to the point `x`.
    pub fn transport(&self, n: usize, mask: u32, x: usize, value: &[i64]) -> Element {
        match (self.transport_arrow(n, mask, x), &self.kind) {
            (Some(g), Kind::Nerve { module, .. }) => module.act(g, value),
            _ => value.to_vec(),
        }
    }

    pub fn transport_hom(&self, n: usize, mask: u32, x: usize) -> Option<&AbHom> {
        match (self.transport_arrow(n, mask, x), &self.kind) {
            (Some(g), Kind::Nerve { module, .. }) => Some(module.action(g)),
            _ => None,
        }
    }

    pub fn points(&self) -> Option<usize> {
        match &self.kind {
            Kind::Constant { points, .. } => Some(*points),
            Kind::Nerve { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::constant_module;
    use crate::groupoid::{cyclic_group, pair_groupoid};

    #[test]
    fn point_set_rank() {
        let s = PointSet::from_points(130, [3, 64, 65, 129]);
        assert_eq!(s.len(), 4);
        assert_eq!(s.rank(65), Some(2));
        assert_eq!(s.rank(129), Some(3));
        assert_eq!(s.rank(4), None);
        assert!(s.is_subset(&PointSet::full(130)));
    }

    #[test]
    fn nerve_tables_follow_structure_maps() {
        let a = constant_module(&pair_groupoid(2), &FinAbGroup::cyclic(2));
        let m = FiniteSimplicialSpace::nerve(&a, 3);
        assert_eq!(m.level_size(2), 8);
        let nerve = m.nerve_data().unwrap();
        let g = a.base();
        for (x, t) in nerve.level(2).iter().enumerate() {
            // mask {0} is the vertex r(g1), mask {2} the vertex s(g2)
            assert_eq!(nerve.level(0)[m.apply_injective(2, 0b001, x)].anchor(g), t.vertices(g)[0]);
            assert_eq!(nerve.level(0)[m.apply_injective(2, 0b100, x)].anchor(g), t.vertices(g)[2]);
        }
    }

    #[test]
    fn transport_uses_leading_arrows() {
        let c3 = cyclic_group(3);
        let a = constant_module(&c3, &FinAbGroup::cyclic(3));
        let m = FiniteSimplicialSpace::nerve(&a, 2);
        assert!(m.transport_hom(2, 0b011, 0).is_none());
        assert!(m.transport_hom(2, 0b110, 0).is_some());
    }
}
