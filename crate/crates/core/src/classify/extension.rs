use std::collections::HashMap;

use num_bigint::BigInt;

use crate::abelian::{Element, InvariantFactors};
use crate::cohomology::{is_cocycle, Cochain, GroupoidComplex};
use crate::gmodule::GModule;
use crate::groupoid::{AxiomFailure, FiniteGroupoid, GroupoidMorphism, GroupoidTables, NerveTuple};

use super::search::extend_morphism;
use super::{element_name, require_finite, ClassifyError};

/// `A -> E -> G`: a groupoid `E` on the objects of `G` with `A_x` embedded
/// in `E_x^x` as the kernel of `π`.
#[derive(Clone, Debug)]
pub struct Extension {
    module: GModule,
    total: FiniteGroupoid,
    /// `inj[x][k]` is the arrow for the `k`-th element of `A_x`.
    inj: Vec<Vec<usize>>,
    proj: GroupoidMorphism,
    /// Inverse of `inj` on the kernel of `π`.
    kernel: Vec<Option<Element>>,
}

impl Extension {
    /// Checks every extension invariant, see [`validate_extension`].
    pub fn new(
        module: GModule,
        total: FiniteGroupoid,
        inj: Vec<Vec<usize>>,
        proj: GroupoidMorphism,
    ) -> Result<Self, ClassifyError> {
        require_finite(&module)?;
        let mut kernel = vec![None; total.n_arrows()];
        if inj.len() != module.base().n_objects() {
            return Err(ClassifyError::InvalidExtension("one embedding per object expected".into()));
        }
        for (x, row) in inj.iter().enumerate() {
            let elems = module.fiber(x).elements();
            if row.len() != elems.len() || row.iter().any(|&k| k >= total.n_arrows()) {
                return Err(ClassifyError::InvalidExtension(format!("embedding of A_{x} has wrong shape")));
            }
            for (k, e) in row.iter().zip(elems) {
                if kernel[*k].is_some() {
                    return Err(ClassifyError::InvalidExtension(format!("embedding of A_{x} is not injective")));
                }
                kernel[*k] = Some(e);
            }
        }
        let e = Extension {
            module,
            total,
            inj,
            proj,
            kernel,
        };
        validate_extension(&e)?;
        Ok(e)
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn total(&self) -> &FiniteGroupoid {
        &self.total
    }

    pub fn proj(&self) -> &GroupoidMorphism {
        &self.proj
    }

    /// `π(γ)`.
    pub fn project(&self, gamma: usize) -> usize {
        self.proj.arrow_map[gamma]
    }

    /// The arrow `i(a)` for `a ∈ A_x`.
    pub fn inject(&self, x: usize, a: &[i64]) -> usize {
        let f = self.module.fiber(x);
        self.inj[x][f.index_of(&f.reduce(a.to_vec()))]
    }

    pub fn injection_table(&self) -> &[Vec<usize>] {
        &self.inj
    }

    /// `i⁻¹(γ)` when `π(γ)` is a unit.
    pub fn kernel_element(&self, gamma: usize) -> Option<&Element> {
        self.kernel[gamma].as_ref()
    }

    /// Arrows of `E` over `g`, in id order.
    pub fn fiber_over(&self, g: usize) -> Vec<usize> {
        self.total.arrows().filter(|&k| self.proj.arrow_map[k] == g).collect()
    }

    /// First arrow over each `g`.
    pub fn canonical_section(&self) -> Vec<usize> {
        let mut s = vec![usize::MAX; self.module.base().n_arrows()];
        for k in self.total.arrows().rev() {
            s[self.proj.arrow_map[k]] = k;
        }
        s
    }

    /// Every lift `g ↦ γ_g`, as a product over the fibers of `π`.
    pub fn all_sections(&self) -> Vec<Vec<usize>> {
        let fibers: Vec<Vec<usize>> = self.module.base().arrows().map(|g| self.fiber_over(g)).collect();
        let mut out = vec![Vec::new()];
        for f in &fibers {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    f.iter().map(move |&k| {
                        let mut p = prefix.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

/// Exactness, the conjugation law `γ i(a) γ⁻¹ = i(π(γ)·a)`, and the
/// groupoid and morphism axioms.
pub fn validate_extension(e: &Extension) -> Result<(), ClassifyError> {
    let bad = |m: String| Err(ClassifyError::InvalidExtension(m));
    let g = e.module.base();
    let t = &e.total;
    let report = t.validate();
    if let Some(f) = report.failures.first() {
        return bad(format!("total space is not a groupoid: {f}"));
    }
    if t.n_objects() != g.n_objects() || e.proj.object_map != g.objects().collect::<Vec<_>>() {
        return bad("projection must be the identity on objects".into());
    }
    e.proj
        .check(t, g)
        .map_err(|err| ClassifyError::InvalidExtension(err.to_string()))?;
    if let Some(h) = g.arrows().find(|&h| !e.proj.arrow_map.contains(&h)) {
        return bad(format!("projection misses arrow {h}"));
    }
    for x in g.objects() {
        let f = e.module.fiber(x);
        for a in f.elements() {
            let k = e.inject(x, &a);
            if t.source(k) != x || t.range(k) != x || !g.is_unit(e.project(k)) {
                return bad(format!("i({}) at object {x} is not in the kernel loop", element_name(&a)));
            }
            for b in f.elements() {
                if t.compose(k, e.inject(x, &b)) != e.inject(x, &f.add(&a, &b)) {
                    return bad(format!("embedding of A_{x} is not a homomorphism"));
                }
            }
        }
    }
    for k in t.arrows() {
        if g.is_unit(e.project(k)) && e.kernel[k].is_none() {
            return bad(format!("arrow {k} lies over a unit but not in the image of i"));
        }
    }
    for k in t.arrows() {
        let (s, r) = (t.source(k), t.range(k));
        for a in e.module.fiber(s).elements() {
            let conj = t.compose(t.compose(k, e.inject(s, &a)), t.inverse(k));
            if conj != e.inject(r, &e.module.act(e.project(k), &a)) {
                return bad(format!("conjugation law fails for arrow {k}"));
            }
        }
    }
    Ok(())
}

/// Arrows `(a, g)` with `a ∈ A_{r(g)}` and product
/// `(a, g)(b, h) = (a + g·b + φ(g, h), gh)`.
pub fn extension_from_cocycle(a: &GModule, phi: &Cochain) -> Result<Extension, ClassifyError> {
    require_finite(a)?;
    if phi.degree() != 2 {
        return Err(ClassifyError::NotACocycle(format!("degree {} given, 2 needed", phi.degree())));
    }
    let g = a.base();
    let mut offset = Vec::with_capacity(g.n_arrows());
    let mut labels: Vec<(Element, usize)> = Vec::new();
    for h in g.arrows() {
        offset.push(labels.len());
        for e in a.fiber(g.range(h)).elements() {
            labels.push((e, h));
        }
    }
    let index = |e: &[i64], h: usize| offset[h] + a.fiber(g.range(h)).index_of(e);
    let n = labels.len();
    let mut comp = vec![None; n * n];
    for (i, (x, p)) in labels.iter().enumerate() {
        for (j, (y, q)) in labels.iter().enumerate() {
            let Some(pq) = g.try_compose(*p, *q) else { continue };
            let f = a.fiber(g.range(*p));
            let v = f.add(&f.add(x, &a.act(*p, y)), phi.at(&[*p, *q]));
            comp[i * n + j] = Some(index(&v, pq));
        }
    }
    let unit = g
        .objects()
        .map(|x| {
            let e = g.unit(x);
            index(&a.fiber(x).neg(phi.at(&[e, e])), e)
        })
        .collect();
    let tables = GroupoidTables {
        n_objects: g.n_objects(),
        src: labels.iter().map(|(_, h)| g.source(*h)).collect(),
        tgt: labels.iter().map(|(_, h)| g.range(*h)).collect(),
        unit,
        comp,
        inv: None,
        object_names: Some(g.object_names().to_vec()),
        arrow_names: Some(
            labels
                .iter()
                .map(|(e, h)| format!("({},{})", element_name(e), g.arrow_name(*h)))
                .collect(),
        ),
    };
    let total = FiniteGroupoid::from_tables(tables)?;
    if let Some(f) = total.validate().failures.into_iter().next() {
        let msg = match f {
            AxiomFailure::Associativity { g: p, h: q, k: r } => format!(
                "associativity fails for ({}, {}, {})",
                total.arrow_name(p),
                total.arrow_name(q),
                total.arrow_name(r)
            ),
            other => other.to_string(),
        };
        return Err(ClassifyError::NotACocycle(msg));
    }
    let inj = g
        .objects()
        .map(|x| {
            let e = g.unit(x);
            let f = a.fiber(x);
            f.elements().iter().map(|v| index(&f.sub(v, phi.at(&[e, e])), e)).collect()
        })
        .collect();
    let proj = GroupoidMorphism {
        object_map: g.objects().collect(),
        arrow_map: labels.iter().map(|(_, h)| *h).collect(),
    };
    Extension::new(a.clone(), total, inj, proj)
}

/// The split extension `A ×_{p,r} G`.
pub fn strictly_trivial_extension(a: &GModule) -> Result<Extension, ClassifyError> {
    extension_from_cocycle(a, &Cochain::zero(a, 2))
}

/// `σ(g)σ(h) = i(φ(g, h)) σ(gh)`.
pub fn cocycle_from_extension(e: &Extension, section: &[usize]) -> Result<Cochain, ClassifyError> {
    let a = e.module();
    let g = a.base();
    if section.len() != g.n_arrows() {
        return Err(ClassifyError::InvalidExtension("section must cover every arrow".into()));
    }
    if let Some(h) = g.arrows().find(|&h| section[h] >= e.total.n_arrows() || e.project(section[h]) != h) {
        return Err(ClassifyError::NotALift(h));
    }
    let t = &e.total;
    Ok(Cochain::from_fn(a, 2, |tuple| {
        let NerveTuple::Arrows(arrows) = tuple else { unreachable!() };
        let (p, q) = (arrows[0], arrows[1]);
        let pq = g.compose(p, q);
        let k = t.compose(t.compose(section[p], section[q]), t.inverse(section[pq]));
        e.kernel[k].clone().expect("lies over a unit")
    }))
}

fn same_base(e1: &Extension, e2: &Extension) -> Result<(), ClassifyError> {
    if e1.module != e2.module {
        return Err(ClassifyError::Mismatch("extensions of different modules".into()));
    }
    Ok(())
}

/// Fiber product `{(γ1, γ2) | π(γ1) = π(γ2)}` modulo `(aγ1, γ2) ~ (γ1, aγ2)`.
pub fn baer_sum(e1: &Extension, e2: &Extension) -> Result<Extension, ClassifyError> {
    same_base(e1, e2)?;
    let a = e1.module();
    let g = a.base();
    let (t1, t2) = (&e1.total, &e2.total);
    let pairs: Vec<(usize, usize)> = t1
        .arrows()
        .flat_map(|p| e2.fiber_over(e1.project(p)).into_iter().map(move |q| (p, q)))
        .collect();
    let pos: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for &(p, q) in &pairs {
        let x = t1.range(p);
        for v in a.fiber(x).elements() {
            let left = pos[&(t1.compose(e1.inject(x, &v), p), q)];
            let right = pos[&(p, t2.compose(e2.inject(x, &v), q))];
            let (ra, rb) = (find(&mut parent, left), find(&mut parent, right));
            // keep the smaller index as the root
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let roots: Vec<usize> = (0..pairs.len()).map(|i| find(&mut parent, i)).collect();
    let mut class_of_root = HashMap::new();
    let mut reps = Vec::new();
    for (i, &r) in roots.iter().enumerate() {
        class_of_root.entry(r).or_insert_with(|| {
            reps.push(i);
            reps.len() - 1
        });
    }
    let class = |i: usize| class_of_root[&roots[i]];
    let n = reps.len();
    let mut comp = vec![None; n * n];
    for (i, &(p1, q1)) in pairs.iter().enumerate() {
        for (j, &(p2, q2)) in pairs.iter().enumerate() {
            let Some(p) = t1.try_compose(p1, p2) else { continue };
            let q = t2.compose(q1, q2);
            let c = class(pos[&(p, q)]);
            match comp[class(i) * n + class(j)] {
                None => comp[class(i) * n + class(j)] = Some(c),
                Some(prev) if prev != c => {
                    return Err(ClassifyError::InvalidExtension("Baer product is not well defined".into()))
                }
                _ => {}
            }
        }
    }
    let rep_pair = |c: usize| pairs[reps[c]];
    let tables = GroupoidTables {
        n_objects: g.n_objects(),
        src: (0..n).map(|c| t1.source(rep_pair(c).0)).collect(),
        tgt: (0..n).map(|c| t1.range(rep_pair(c).0)).collect(),
        unit: g
            .objects()
            .map(|x| class(pos[&(t1.unit(x), t2.unit(x))]))
            .collect(),
        comp,
        inv: None,
        object_names: Some(g.object_names().to_vec()),
        arrow_names: Some(
            (0..n)
                .map(|c| {
                    let (p, q) = rep_pair(c);
                    format!("[{}|{}]", t1.arrow_name(p), t2.arrow_name(q))
                })
                .collect(),
        ),
    };
    let total = FiniteGroupoid::from_tables(tables)?;
    let inj = g
        .objects()
        .map(|x| {
            a.fiber(x)
                .elements()
                .iter()
                .map(|v| class(pos[&(e1.inject(x, v), t2.unit(x))]))
                .collect()
        })
        .collect();
    let proj = GroupoidMorphism {
        object_map: g.objects().collect(),
        arrow_map: (0..n).map(|c| e1.project(rep_pair(c).0)).collect(),
    };
    Extension::new(a.clone(), total, inj, proj)
}

/// Same total space with `i'(a) = i(-a)`.
pub fn extension_inverse(e: &Extension) -> Result<Extension, ClassifyError> {
    let a = e.module();
    let inj = a
        .base()
        .objects()
        .map(|x| {
            let f = a.fiber(x);
            f.elements().iter().map(|v| e.inject(x, &f.neg(v))).collect()
        })
        .collect();
    Extension::new(a.clone(), e.total.clone(), inj, e.proj.clone())
}

/// Mutually constructible witnesses that `E` is strictly trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictTriviality {
    /// A groupoid morphism `σ: G -> E` with `π∘σ = id`.
    pub section: Vec<usize>,
    /// `φ(γ) = γ[σπ(γ)]⁻¹`, read in `A_{r(γ)}`; `φ(γγ') = φ(γ) + π(γ)·φ(γ')`
    /// and `φ(i(a)) = a`.
    pub retraction: Vec<Element>,
    /// `γ ↦ (φ(γ), π(γ))` as arrow ids of [`strictly_trivial_extension`].
    pub isomorphism: Vec<usize>,
}

/// Exhaustive search for a morphism section of `π`; `None` is definitive.
pub fn is_strictly_trivial(e: &Extension) -> Result<Option<StrictTriviality>, ClassifyError> {
    let a = e.module();
    let g = a.base();
    let mut init = vec![None; g.n_arrows()];
    for x in g.objects() {
        init[g.unit(x)] = Some(e.total.unit(x));
    }
    let fibers: Vec<Vec<usize>> = g.arrows().map(|h| e.fiber_over(h)).collect();
    let Some(section) = extend_morphism(g, &e.total, init, &|h| fibers[h].clone()) else {
        return Ok(None);
    };
    witnesses_from_section(e, section).map(Some)
}

fn witnesses_from_section(e: &Extension, section: Vec<usize>) -> Result<StrictTriviality, ClassifyError> {
    let a = e.module();
    let t = &e.total;
    let retraction: Vec<Element> = t
        .arrows()
        .map(|k| {
            let u = t.compose(k, t.inverse(section[e.project(k)]));
            e.kernel[u].clone().expect("lies over a unit")
        })
        .collect();
    let split = strictly_trivial_extension(a)?;
    let isomorphism: Vec<usize> = t
        .arrows()
        .map(|k| {
            let h = e.project(k);
            // (a, g) sits in the split extension's fiber over g at index of a
            let fiber = split.fiber_over(h);
            let f = a.fiber(a.base().range(h));
            fiber[f.index_of(&retraction[k])]
        })
        .collect();
    let iso = GroupoidMorphism {
        object_map: a.base().objects().collect(),
        arrow_map: isomorphism.clone(),
    };
    if iso.check(t, split.total()).is_err() || !iso.is_bijective(split.total()) {
        return Err(ClassifyError::InvalidExtension("section does not split the extension".into()));
    }
    Ok(StrictTriviality {
        section,
        retraction,
        isomorphism,
    })
}

/// `σ'(g) = i(-b(g)) σ(g)` is a morphism section when `φ_σ = d b`.
pub fn section_from_coboundary(e: &Extension, section: &[usize], b: &Cochain) -> Result<StrictTriviality, ClassifyError> {
    let g = e.module().base();
    let a = e.module();
    let fixed: Vec<usize> = g
        .arrows()
        .map(|h| {
            let x = g.range(h);
            e.total.compose(e.inject(x, &a.fiber(x).neg(b.at(&[h]))), section[h])
        })
        .collect();
    let morphism = GroupoidMorphism {
        object_map: g.objects().collect(),
        arrow_map: fixed.clone(),
    };
    morphism
        .check(g, &e.total)
        .map_err(|_| ClassifyError::NotACocycle("cocycle of the section is not d b".into()))?;
    witnesses_from_section(e, fixed)
}

/// An isomorphism `E1 -> E2` commuting with `i` and `π`, if any.
pub fn are_equivalent(e1: &Extension, e2: &Extension) -> Result<Option<GroupoidMorphism>, ClassifyError> {
    same_base(e1, e2)?;
    let g = e1.module().base();
    if e1.total.n_arrows() != e2.total.n_arrows() {
        return Ok(None);
    }
    let mut init = vec![None; e1.total.n_arrows()];
    for x in g.objects() {
        for (k1, k2) in e1.inj[x].iter().zip(&e2.inj[x]) {
            init[*k1] = Some(*k2);
        }
    }
    let fibers: Vec<Vec<usize>> = g.arrows().map(|h| e2.fiber_over(h)).collect();
    let found = extend_morphism(&e1.total, &e2.total, init, &|k| fibers[e1.project(k)].clone());
    Ok(found.and_then(|arrow_map| {
        let m = GroupoidMorphism {
            object_map: g.objects().collect(),
            arrow_map,
        };
        m.is_bijective(&e2.total).then_some(m)
    }))
}

/// One extension per class of `H^2(G, A)`.
#[derive(Clone, Debug)]
pub struct ExtClass {
    /// Coordinates in the generators of `h2`.
    pub coords: Vec<BigInt>,
    pub cocycle: Cochain,
    pub extension: Extension,
}

#[derive(Clone, Debug)]
pub struct ExtClasses {
    pub h2: InvariantFactors,
    /// Order of each generator of `h2`.
    pub generator_orders: Vec<BigInt>,
    pub classes: Vec<ExtClass>,
    complex: GroupoidComplex,
}

impl ExtClasses {
    /// Class coordinates of an extension via its canonical section.
    pub fn class_of(&self, e: &Extension) -> Result<Vec<BigInt>, ClassifyError> {
        let phi = cocycle_from_extension(e, &e.canonical_section())?;
        self.complex
            .class_of(&phi)?
            .ok_or_else(|| ClassifyError::NotACocycle("extension cocycle failed the cycle test".into()))
    }

    /// Index of the class with the given coordinates.
    pub fn index_of(&self, coords: &[BigInt]) -> Option<usize> {
        self.classes.iter().position(|c| c.coords == coords)
    }

    /// Coordinatewise sum modulo the generator orders.
    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        x.iter()
            .zip(y)
            .zip(&self.generator_orders)
            .map(|((a, b), d)| {
                let s = a + b;
                if *d == BigInt::from(0) {
                    s
                } else {
                    ((s % d) + d) % d
                }
            })
            .collect()
    }

    pub fn complex(&self) -> &GroupoidComplex {
        &self.complex
    }
}

/// All classes of extensions of `G` by a finite module.
pub fn ext_classes(a: &GModule) -> Result<ExtClasses, ClassifyError> {
    require_finite(a)?;
    let complex = GroupoidComplex::new(a, 2)?;
    let pres = complex.presentation(2)?;
    let orders: Vec<BigInt> = pres.generator_orders().to_vec();
    let mut coords_list: Vec<Vec<BigInt>> = vec![Vec::new()];
    for d in &orders {
        let d = u64::try_from(d).expect("finite fibers give finite H^2");
        coords_list = coords_list
            .into_iter()
            .flat_map(|p| {
                (0..d).map(move |v| {
                    let mut q = p.clone();
                    q.push(BigInt::from(v));
                    q
                })
            })
            .collect();
    }
    let mut classes = Vec::with_capacity(coords_list.len());
    for coords in coords_list {
        let cocycle = complex.unflatten(2, &pres.representative(&coords));
        debug_assert!(is_cocycle(a, &cocycle)?);
        let extension = extension_from_cocycle(a, &cocycle)?;
        classes.push(ExtClass {
            coords,
            cocycle,
            extension,
        });
    }
    Ok(ExtClasses {
        h2: pres.factors.clone(),
        generator_orders: orders,
        classes,
        complex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{AbHom, FinAbGroup};
    use crate::cohomology::{differential, is_coboundary};
    use crate::gmodule::constant_module;
    use crate::groupoid::cyclic_group;

    /// Order of an arrow `γ` in its isotropy group (loops only).
    fn loop_order(t: &FiniteGroupoid, k: usize) -> usize {
        let u = t.unit(t.source(k));
        let mut p = k;
        let mut n = 1;
        while p != u {
            p = t.compose(p, k);
            n += 1;
        }
        n
    }

    fn z2() -> GModule {
        constant_module(&cyclic_group(2), &FinAbGroup::cyclic(2))
    }

    fn ss(a: &GModule) -> Cochain {
        Cochain::from_fn(a, 2, |t| vec![(t.arrows() == [1, 1]) as i64])
    }

    #[test]
    fn z4_over_c2() {
        let a = z2();
        let e = extension_from_cocycle(&a, &ss(&a)).unwrap();
        assert_eq!(e.total().n_arrows(), 4);
        let over_s = e.fiber_over(1);
        assert!(over_s.iter().all(|&k| loop_order(e.total(), k) == 4));
        assert!(is_strictly_trivial(&e).unwrap().is_none());
        let split = strictly_trivial_extension(&a).unwrap();
        assert!(is_strictly_trivial(&split).unwrap().is_some());
        assert!(are_equivalent(&e, &split).unwrap().is_none());
        assert!(are_equivalent(&e, &e).unwrap().is_some());
    }

    #[test]
    fn canonical_section_of_split_extension_gives_zero() {
        let a = z2();
        let split = strictly_trivial_extension(&a).unwrap();
        let phi = cocycle_from_extension(&split, &split.canonical_section()).unwrap();
        assert!(phi.is_zero(&a));
    }

    #[test]
    fn every_section_of_z4_gives_the_same_class() {
        let a = z2();
        let e = extension_from_cocycle(&a, &ss(&a)).unwrap();
        let cx = GroupoidComplex::new(&a, 2).unwrap();
        let target = cx.class_of(&ss(&a)).unwrap().unwrap();
        for s in e.all_sections() {
            let phi = cocycle_from_extension(&e, &s).unwrap();
            assert_eq!(cx.class_of(&phi).unwrap().unwrap(), target);
        }
    }

    #[test]
    fn unnormalized_constant_cocycle() {
        let a = z2();
        let ones = Cochain::from_fn(&a, 2, |_| vec![1]);
        assert!(is_cocycle(&a, &ones).unwrap());
        let e = extension_from_cocycle(&a, &ones).unwrap();
        // φ ≡ 1 = d(b) with b ≡ 1, so the class is trivial
        let split = strictly_trivial_extension(&a).unwrap();
        assert!(are_equivalent(&e, &split).unwrap().is_some());
    }

    #[test]
    fn non_cocycle_cites_a_triple() {
        let a = z2();
        let bad = Cochain::from_fn(&a, 2, |t| vec![(t.arrows() == [0, 1]) as i64]);
        match extension_from_cocycle(&a, &bad) {
            Err(ClassifyError::NotACocycle(m)) => assert!(m.contains("associativity") || m.contains("unit")),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn baer_sums_over_c2() {
        let a = z2();
        let e = extension_from_cocycle(&a, &ss(&a)).unwrap();
        let split = strictly_trivial_extension(&a).unwrap();
        let sum = baer_sum(&e, &split).unwrap();
        assert!(are_equivalent(&sum, &e).unwrap().is_some());
        let twice = baer_sum(&e, &e).unwrap();
        assert!(is_strictly_trivial(&twice).unwrap().is_some());
        let inv = extension_inverse(&e).unwrap();
        assert!(is_strictly_trivial(&baer_sum(&e, &inv).unwrap()).unwrap().is_some());
    }

    #[test]
    fn strict_triviality_matches_coboundaries() {
        let b = FinAbGroup::cyclic(3);
        let a = GModule::new(cyclic_group(2), vec![b.clone()], vec![AbHom::identity(b.clone()), AbHom::scalar(b, -1)]).unwrap();
        let beta = Cochain::from_fn(&a, 1, |t| vec![t.arrows()[0] as i64 + 1]);
        let phi = differential(&a, &beta).unwrap();
        let e = extension_from_cocycle(&a, &phi).unwrap();
        let w = is_strictly_trivial(&e).unwrap().expect("coboundary class");
        let s = e.canonical_section();
        let cocycle = cocycle_from_extension(&e, &s).unwrap();
        let b = is_coboundary(&a, &cocycle).unwrap().unwrap();
        let w2 = section_from_coboundary(&e, &s, &b).unwrap();
        assert_eq!(w.isomorphism.len(), w2.isomorphism.len());
    }

    #[test]
    fn ext_classes_over_c2() {
        let ext = ext_classes(&z2()).unwrap();
        assert_eq!(ext.classes.len(), 2);
        let split: Vec<bool> = ext
            .classes
            .iter()
            .map(|c| is_strictly_trivial(&c.extension).unwrap().is_some())
            .collect();
        assert_eq!(split, vec![true, false]);
    }

    #[test]
    fn infinite_fibers_are_rejected() {
        let a = constant_module(&cyclic_group(2), &FinAbGroup::integers());
        assert!(matches!(ext_classes(&a), Err(ClassifyError::InfiniteFiber(0))));
    }
}
