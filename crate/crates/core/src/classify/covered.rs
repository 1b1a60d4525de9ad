use std::collections::BTreeMap;

use crate::abelian::Element;
use crate::cohomology::Cochain;
use crate::gmodule::GModule;
use crate::groupoid::{FiniteGroupoid, GroupoidMorphism, GroupoidTables};

use super::extension::Extension;
use super::{element_name, require_finite, ClassifyError};

/// Indexed family of arrow subsets `(U_i)` covering `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowCover {
    sets: Vec<Vec<usize>>,
}

impl ArrowCover {
    pub fn new(g: &FiniteGroupoid, mut sets: Vec<Vec<usize>>) -> Result<Self, ClassifyError> {
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
            if s.iter().any(|&h| h >= g.n_arrows()) {
                return Err(ClassifyError::InvalidCover("cover mentions a missing arrow".into()));
            }
        }
        if let Some(h) = g.arrows().find(|h| !sets.iter().any(|s| s.contains(h))) {
            return Err(ClassifyError::InvalidCover(format!("arrow {h} is not covered")));
        }
        Ok(ArrowCover { sets })
    }

    pub fn trivial(g: &FiniteGroupoid) -> Self {
        ArrowCover {
            sets: vec![g.arrows().collect()],
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn contains(&self, i: usize, g: usize) -> bool {
        self.sets[i].binary_search(&g).is_ok()
    }

    /// Indices `i` with `g ∈ U_i`.
    pub fn indices(&self, g: usize) -> Vec<usize> {
        (0..self.sets.len()).filter(|&i| self.contains(i, g)).collect()
    }
}

/// Partial 2-cochains `φ_{ijk}(g, h)`, defined when `g ∈ U_i`, `gh ∈ U_j`
/// and `h ∈ U_k`.
#[derive(Clone, Debug)]
pub struct CoveredCocycleData {
    module: GModule,
    cover: ArrowCover,
    values: BTreeMap<(usize, usize, usize, usize, usize), Element>,
}

impl CoveredCocycleData {
    /// `f(i, j, k, g, h)` on every admissible key.
    pub fn from_fn(
        a: &GModule,
        cover: ArrowCover,
        mut f: impl FnMut(usize, usize, usize, usize, usize) -> Element,
    ) -> Self {
        let g = a.base();
        let mut values = BTreeMap::new();
        for p in g.arrows() {
            for q in g.arrows() {
                let Some(pq) = g.try_compose(p, q) else { continue };
                for &i in &cover.indices(p) {
                    for &j in &cover.indices(pq) {
                        for &k in &cover.indices(q) {
                            let v = a.fiber(g.range(p)).reduce(f(i, j, k, p, q));
                            values.insert((i, j, k, p, q), v);
                        }
                    }
                }
            }
        }
        CoveredCocycleData {
            module: a.clone(),
            cover,
            values,
        }
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn cover(&self) -> &ArrowCover {
        &self.cover
    }

    /// `φ_{ijk}(g, h)`.
    pub fn value(&self, i: usize, j: usize, k: usize, g: usize, h: usize) -> &Element {
        &self.values[&(i, j, k, g, h)]
    }

    pub fn set(&mut self, key: (usize, usize, usize, usize, usize), v: Element) {
        self.values.insert(key, v);
    }

    /// `ψ_{kj}(g) = -φ_{iii}(x, x) + φ_{ijk}(x, g)` with `x = r(g)`.
    pub fn psi(&self, i: usize, k: usize, j: usize, g: usize) -> Element {
        let grp = self.module.base();
        let e = grp.unit(grp.range(g));
        let f = self.module.fiber(grp.range(g));
        f.sub(self.value(i, j, k, e, g), self.value(i, i, i, e, e))
    }
}

/// Restriction of a global cocycle `φ` shifted by the index-dependent
/// coboundary of `β_i(g)`:
/// `φ_{ijk}(g, h) = φ(g, h) + g·β_k(h) - β_j(gh) + β_i(g)`.
pub fn coherent_covered_data(
    a: &GModule,
    cover: ArrowCover,
    phi: &Cochain,
    beta: &dyn Fn(usize, usize) -> Element,
) -> CoveredCocycleData {
    let g = a.base();
    CoveredCocycleData::from_fn(a, cover, |i, j, k, p, q| {
        let f = a.fiber(g.range(p));
        let mut v = f.add(phi.at(&[p, q]), &a.act(p, &beta(k, q)));
        v = f.sub(&v, &beta(j, g.compose(p, q)));
        f.add(&v, &beta(i, p))
    })
}

/// First violation of the covered cocycle identity, if any.
pub fn check_covered_cocycle(d: &CoveredCocycleData) -> Option<String> {
    let a = &d.module;
    let g = a.base();
    let u = &d.cover;
    for p in g.arrows() {
        for q in g.arrows() {
            let Some(pq) = g.try_compose(p, q) else { continue };
            for r in g.arrows() {
                let Some(qr) = g.try_compose(q, r) else { continue };
                let pqr = g.compose(pq, r);
                let f = a.fiber(g.range(p));
                for &l01 in &u.indices(p) {
                    for &l02 in &u.indices(pq) {
                        for &l03 in &u.indices(pqr) {
                            for &l12 in &u.indices(q) {
                                for &l13 in &u.indices(qr) {
                                    for &l23 in &u.indices(r) {
                                        let mut v = a.act(p, d.value(l12, l13, l23, q, r));
                                        v = f.sub(&v, d.value(l02, l03, l23, pq, r));
                                        v = f.add(&v, d.value(l01, l03, l13, p, qr));
                                        v = f.sub(&v, d.value(l01, l02, l12, p, q));
                                        if !f.is_zero(&v) {
                                            return Some(format!(
                                                "arrows ({p}, {q}, {r}) with indices ({l01},{l02},{l03},{l12},{l13},{l23})"
                                            ));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsiFailure {
    /// `ψ_{kj}(g)` changes with the auxiliary index `i`.
    DependsOnAuxiliary { g: usize, k: usize, j: usize, i1: usize, i2: usize },
    NonzeroDiagonal { g: usize, j: usize },
    NotAntisymmetric { g: usize, j: usize, k: usize },
    /// `ψ_{jk} - ψ_{mk} + ψ_{mj} != 0`.
    CocycleRelation { g: usize, j: usize, k: usize, m: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PsiReport {
    pub failures: Vec<PsiFailure>,
    /// Number of `ψ` values compared.
    pub checked: usize,
}

impl PsiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Independence of `ψ_{kj}(g)` from `i` and the identities
/// `ψ_jj = 0`, `ψ_kj = -ψ_jk`, `ψ_jk - ψ_mk + ψ_mj = 0`.
pub fn verify_psi_coherence(d: &CoveredCocycleData) -> PsiReport {
    let a = &d.module;
    let g = a.base();
    let u = &d.cover;
    let mut report = PsiReport::default();
    for h in g.arrows() {
        let f = a.fiber(g.range(h));
        let aux = u.indices(g.unit(g.range(h)));
        let idx = u.indices(h);
        let psi = |k: usize, j: usize| d.psi(aux[0], k, j, h);
        for &k in &idx {
            for &j in &idx {
                let first = psi(k, j);
                for &i in &aux[1..] {
                    report.checked += 1;
                    if d.psi(i, k, j, h) != first {
                        report.failures.push(PsiFailure::DependsOnAuxiliary {
                            g: h,
                            k,
                            j,
                            i1: aux[0],
                            i2: i,
                        });
                    }
                }
                report.checked += 1;
                if j == k && !f.is_zero(&first) {
                    report.failures.push(PsiFailure::NonzeroDiagonal { g: h, j });
                }
                if !f.is_zero(&f.add(&first, &psi(j, k))) {
                    report.failures.push(PsiFailure::NotAntisymmetric { g: h, j, k });
                }
                for &m in &idx {
                    let v = f.add(&f.sub(&psi(j, k), &psi(m, k)), &psi(m, j));
                    if !f.is_zero(&v) {
                        report.failures.push(PsiFailure::CocycleRelation { g: h, j, k, m });
                    }
                }
            }
        }
    }
    report
}

/// `∐ (a, g, k) / ~` with `(a, g, k) ~ (a + ψ_{kj}(g), g, j)` and product
/// `[a, g, λ01][b, h, λ12] = [a + g·b + φ_{λ01 λ02 λ12}(g, h), gh, λ02]`.
///
/// Classes are represented at the smallest index containing the arrow;
/// every choice of representatives and of `λ02` is checked to give the same
/// product, and every `[-φ_iii(x, x), x, i]` the same unit.
pub fn covered_extension(d: &CoveredCocycleData) -> Result<Extension, ClassifyError> {
    let a = &d.module;
    require_finite(a)?;
    if let Some(w) = check_covered_cocycle(d) {
        return Err(ClassifyError::NotACocycle(w));
    }
    let g = a.base();
    let u = &d.cover;
    let home: Vec<usize> = g.arrows().map(|h| u.indices(h)[0]).collect();
    let mut offset = Vec::with_capacity(g.n_arrows());
    let mut labels: Vec<(Element, usize)> = Vec::new();
    for h in g.arrows() {
        offset.push(labels.len());
        for e in a.fiber(g.range(h)).elements() {
            labels.push((e, h));
        }
    }
    let aux = |h: usize| u.indices(g.unit(g.range(h)))[0];
    // canonical arrow id of [v, h, k]
    let canon = |v: &[i64], h: usize, k: usize| {
        let f = a.fiber(g.range(h));
        let moved = f.add(v, &d.psi(aux(h), k, home[h], h));
        offset[h] + f.index_of(&moved)
    };
    let n = labels.len();
    let mut comp = vec![None; n * n];
    for p in g.arrows() {
        for q in g.arrows() {
            let Some(pq) = g.try_compose(p, q) else { continue };
            let f = a.fiber(g.range(p));
            for v in f.elements() {
                for w in a.fiber(g.range(q)).elements() {
                    let lhs_id = offset[p] + f.index_of(&v);
                    let rhs_id = offset[q] + a.fiber(g.range(q)).index_of(&w);
                    for &k1 in &u.indices(p) {
                        for &k2 in &u.indices(q) {
                            // representatives of the classes of (v, p) and (w, q) at k1, k2
                            let v1 = f.sub(&v, &d.psi(aux(p), k1, home[p], p));
                            let w1 = a.fiber(g.range(q)).sub(&w, &d.psi(aux(q), k2, home[q], q));
                            for &l02 in &u.indices(pq) {
                                let s = f.add(&f.add(&v1, &a.act(p, &w1)), d.value(k1, l02, k2, p, q));
                                let c = canon(&s, pq, l02);
                                match comp[lhs_id * n + rhs_id] {
                                    None => comp[lhs_id * n + rhs_id] = Some(c),
                                    Some(prev) if prev != c => {
                                        return Err(ClassifyError::InvalidCover(format!(
                                            "product of classes over ({p}, {q}) depends on representatives"
                                        )))
                                    }
                                    _ => {}
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut unit = Vec::with_capacity(g.n_objects());
    for x in g.objects() {
        let e = g.unit(x);
        let f = a.fiber(x);
        let ids: Vec<usize> = u
            .indices(e)
            .into_iter()
            .map(|i| canon(&f.neg(d.value(i, i, i, e, e)), e, i))
            .collect();
        if ids.windows(2).any(|w| w[0] != w[1]) {
            return Err(ClassifyError::InvalidCover(format!("unit at object {x} depends on the index")));
        }
        unit.push(ids[0]);
    }
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
                .map(|(e, h)| format!("[{},{},{}]", element_name(e), g.arrow_name(*h), home[*h]))
                .collect(),
        ),
    };
    let total = FiniteGroupoid::from_tables(tables)?;
    let inj = g
        .objects()
        .map(|x| {
            let e = g.unit(x);
            let i = home[e];
            let f = a.fiber(x);
            // i(a) = [a - φ_iii(x, x), x, i]
            f.elements().iter().map(|v| canon(&f.sub(v, d.value(i, i, i, e, e)), e, i)).collect()
        })
        .collect();
    let proj = GroupoidMorphism {
        object_map: g.objects().collect(),
        arrow_map: labels.iter().map(|(_, h)| *h).collect(),
    };
    Extension::new(a.clone(), total, inj, proj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FinAbGroup;
    use crate::classify::{are_equivalent, extension_from_cocycle};
    use crate::gmodule::constant_module;
    use crate::groupoid::cyclic_group;

    fn z2() -> GModule {
        constant_module(&cyclic_group(2), &FinAbGroup::cyclic(2))
    }

    #[test]
    fn trivial_cover_is_coherent() {
        let a = z2();
        let phi = Cochain::from_fn(&a, 2, |t| vec![(t.arrows() == [1, 1]) as i64]);
        let d = coherent_covered_data(&a, ArrowCover::trivial(a.base()), &phi, &|_, _| vec![0]);
        assert!(check_covered_cocycle(&d).is_none());
        assert!(verify_psi_coherence(&d).passed());
    }

    #[test]
    fn redundant_cover_has_zero_psi() {
        let a = z2();
        let cover = ArrowCover::new(a.base(), vec![vec![0, 1], vec![0, 1]]).unwrap();
        let phi = Cochain::from_fn(&a, 2, |t| vec![(t.arrows() == [1, 1]) as i64]);
        let d = coherent_covered_data(&a, cover, &phi, &|_, _| vec![0]);
        let report = verify_psi_coherence(&d);
        assert!(report.passed());
        for k in 0..2 {
            for j in 0..2 {
                assert_eq!(d.psi(0, k, j, 1), vec![0]);
            }
        }
        let e = covered_extension(&d).unwrap();
        assert!(are_equivalent(&e, &extension_from_cocycle(&a, &phi).unwrap()).unwrap().is_some());
    }

    #[test]
    fn shifted_data_still_builds_the_same_extension() {
        let a = z2();
        let cover = ArrowCover::new(a.base(), vec![vec![0, 1], vec![1]]).unwrap();
        let phi = Cochain::from_fn(&a, 2, |t| vec![(t.arrows() == [1, 1]) as i64]);
        let d = coherent_covered_data(&a, cover, &phi, &|i, g| vec![(i + g) as i64]);
        assert!(check_covered_cocycle(&d).is_none());
        assert!(verify_psi_coherence(&d).passed());
        let e = covered_extension(&d).unwrap();
        assert!(are_equivalent(&e, &extension_from_cocycle(&a, &phi).unwrap()).unwrap().is_some());
    }

    #[test]
    fn corrupted_data_is_reported() {
        let a = z2();
        let cover = ArrowCover::new(a.base(), vec![vec![0, 1], vec![0, 1]]).unwrap();
        let mut d = coherent_covered_data(&a, cover, &Cochain::zero(&a, 2), &|_, _| vec![0]);
        d.set((1, 0, 1, 0, 1), vec![1]);
        assert!(!verify_psi_coherence(&d).passed());
        assert!(check_covered_cocycle(&d).is_some());
    }
}
