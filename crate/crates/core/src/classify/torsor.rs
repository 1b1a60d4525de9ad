use crate::abelian::Element;
use crate::cohomology::{is_cocycle, Cochain};
use crate::gmodule::GModule;
use crate::groupoid::{GSet, NerveTuple};

use super::{element_name, require_finite, ClassifyError};

/// A finite set over the objects with a fiberwise free transitive
/// `A`-action and a compatible `G`-action.
#[derive(Clone, Debug)]
pub struct EquivariantTorsor {
    module: GModule,
    anchor: Vec<usize>,
    /// `plus[p][k]` is `p + a` where `a` is the `k`-th element of `A_{anchor(p)}`.
    plus: Vec<Vec<usize>>,
    action: GSet,
    names: Vec<String>,
}

impl EquivariantTorsor {
    pub fn new(
        module: GModule,
        anchor: Vec<usize>,
        plus: Vec<Vec<usize>>,
        act: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, ClassifyError> {
        require_finite(&module)?;
        let action = GSet::new(module.base(), anchor.clone(), act)
            .map_err(|e| ClassifyError::InvalidTorsor(e.to_string()))?;
        let names = (0..anchor.len()).map(|p| format!("p{p}")).collect();
        let t = EquivariantTorsor {
            module,
            anchor,
            plus,
            action,
            names,
        };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<(), ClassifyError> {
        let bad = |m: String| Err(ClassifyError::InvalidTorsor(m));
        let a = &self.module;
        let n = self.anchor.len();
        if self.plus.len() != n {
            return bad("addition table has wrong length".into());
        }
        for p in 0..n {
            let x = self.anchor[p];
            let elems = a.fiber(x).elements();
            if self.plus[p].len() != elems.len() {
                return bad(format!("addition row of point {p} has wrong length"));
            }
            if self.plus[p].iter().any(|&q| q >= n || self.anchor[q] != x) {
                return bad(format!("adding to point {p} leaves its fiber"));
            }
            if self.plus[p][a.fiber(x).index_of(&a.fiber(x).zero())] != p {
                return bad(format!("adding zero moves point {p}"));
            }
            let mut hit: Vec<usize> = self.plus[p].clone();
            hit.sort_unstable();
            hit.dedup();
            let fiber_size = self.anchor.iter().filter(|&&y| y == x).count();
            if hit.len() != elems.len() || fiber_size != elems.len() {
                return bad(format!("action on the fiber of point {p} is not free and transitive"));
            }
            for (i, u) in elems.iter().enumerate() {
                for (j, v) in elems.iter().enumerate() {
                    let sum = a.fiber(x).index_of(&a.fiber(x).add(u, v));
                    if self.plus[self.plus[p][i]][j] != self.plus[p][sum] {
                        return bad(format!("(p + a) + b != p + (a + b) at point {p}"));
                    }
                }
            }
        }
        let g = a.base();
        for h in g.arrows() {
            for p in (0..n).filter(|&p| self.anchor[p] == g.source(h)) {
                let hp = self.act(h, p);
                for (k, u) in a.fiber(g.source(h)).elements().iter().enumerate() {
                    let lhs = self.act(h, self.plus[p][k]);
                    let rhs = self.add(hp, &a.act(h, u));
                    if lhs != rhs {
                        return bad(format!("g(p + a) != gp + ga for arrow {h}, point {p}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn len(&self) -> usize {
        self.anchor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchor.is_empty()
    }

    pub fn anchor(&self, p: usize) -> usize {
        self.anchor[p]
    }

    pub fn name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn points_over(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.anchor.len()).filter(move |&p| self.anchor[p] == x)
    }

    /// `g·p`, defined when `s(g)` is the anchor of `p`.
    pub fn act(&self, g: usize, p: usize) -> usize {
        self.action.act(g, p).expect("arrow acts on points over its source")
    }

    pub fn add(&self, p: usize, a: &[i64]) -> usize {
        let f = self.module.fiber(self.anchor[p]);
        self.plus[p][f.index_of(&f.reduce(a.to_vec()))]
    }

    /// The unique `a` with `q + a = p`.
    pub fn difference(&self, p: usize, q: usize) -> Element {
        let x = self.anchor[q];
        assert_eq!(self.anchor[p], x, "points lie over different objects");
        let f = self.module.fiber(x);
        let k = self.plus[q].iter().position(|&r| r == p).expect("fibers are transitive");
        f.elements().swap_remove(k)
    }
}

/// Total space `∐ A_x` with `g·a = α_g(a) - φ(g)`.
pub fn torsor_from_cocycle(a: &GModule, phi: &Cochain) -> Result<EquivariantTorsor, ClassifyError> {
    require_finite(a)?;
    if phi.degree() != 1 || !is_cocycle(a, phi)? {
        return Err(ClassifyError::NotACocycle("torsors need a 1-cocycle".into()));
    }
    let g = a.base();
    let mut anchor = Vec::new();
    let mut labels = Vec::new();
    let mut start = Vec::new();
    for x in g.objects() {
        start.push(anchor.len());
        for e in a.fiber(x).elements() {
            anchor.push(x);
            labels.push(e);
        }
    }
    let point = |x: usize, e: &[i64]| start[x] + a.fiber(x).index_of(e);
    let plus = (0..anchor.len())
        .map(|p| {
            let x = anchor[p];
            let f = a.fiber(x);
            f.elements().iter().map(|b| point(x, &f.add(&labels[p], b))).collect()
        })
        .collect();
    let act = g
        .arrows()
        .map(|h| {
            (0..anchor.len())
                .map(|p| {
                    (anchor[p] == g.source(h)).then(|| {
                        let r = g.range(h);
                        point(r, &a.fiber(r).sub(&a.act(h, &labels[p]), phi.at(&[h])))
                    })
                })
                .collect()
        })
        .collect();
    let mut t = EquivariantTorsor::new(a.clone(), anchor.clone(), plus, act)?;
    t.names = anchor
        .iter()
        .zip(&labels)
        .map(|(&x, e)| format!("({},{})", g.object_name(x), element_name(e)))
        .collect();
    Ok(t)
}

/// `φ(g) = σ(r(g)) - g·σ(s(g))` for one chosen point `σ(x)` per object.
pub fn cocycle_from_torsor(t: &EquivariantTorsor, sections: &[usize]) -> Result<Cochain, ClassifyError> {
    let a = t.module();
    let g = a.base();
    if sections.len() != g.n_objects() || g.objects().any(|x| sections[x] >= t.len() || t.anchor(sections[x]) != x) {
        return Err(ClassifyError::InvalidTorsor("sections must pick one point over each object".into()));
    }
    Ok(Cochain::from_fn(a, 1, |tuple| {
        let NerveTuple::Arrows(arrows) = tuple else { unreachable!() };
        let h = arrows[0];
        t.difference(sections[g.range(h)], t.act(h, sections[g.source(h)]))
    }))
}

/// A `G`-invariant choice of point over every object, if one exists.
pub fn equivariant_section(t: &EquivariantTorsor) -> Option<Vec<usize>> {
    let g = t.module().base();
    let mut chosen: Vec<Option<usize>> = vec![None; g.n_objects()];
    for x in g.objects() {
        if chosen[x].is_some() {
            continue;
        }
        let found = t.points_over(x).find_map(|p| {
            let mut trial = chosen.clone();
            for h in g.arrows_from(x) {
                let q = t.act(h, p);
                match trial[g.range(h)] {
                    Some(prev) if prev != q => return None,
                    _ => trial[g.range(h)] = Some(q),
                }
            }
            // every arrow between objects of this component must agree
            let ok = g.arrows().all(|h| match (trial[g.source(h)], trial[g.range(h)]) {
                (Some(ps), Some(pr)) => t.act(h, ps) == pr,
                _ => true,
            });
            ok.then_some(trial)
        })?;
        chosen = found;
    }
    Some(chosen.into_iter().map(|p| p.expect("every object assigned")).collect())
}

/// Whether `map` is an `A`- and `G`-equivariant bijection over the objects.
pub fn is_torsor_isomorphism(s: &EquivariantTorsor, t: &EquivariantTorsor, map: &[usize]) -> bool {
    let a = s.module();
    let g = a.base();
    if map.len() != s.len() || s.len() != t.len() {
        return false;
    }
    let mut seen = vec![false; t.len()];
    for (p, &q) in map.iter().enumerate() {
        if q >= t.len() || seen[q] || s.anchor(p) != t.anchor(q) {
            return false;
        }
        seen[q] = true;
    }
    for p in 0..s.len() {
        let x = s.anchor(p);
        for e in a.fiber(x).elements() {
            if map[s.add(p, &e)] != t.add(map[p], &e) {
                return false;
            }
        }
        for h in g.arrows_from(x) {
            if map[s.act(h, p)] != t.act(h, map[p]) {
                return false;
            }
        }
    }
    true
}
