//! The groupoid cochain complex `C^n(G, A)` and its cohomology.
//!
//! A cochain of degree `n` assigns to each composable tuple `(g1, ..., gn)`
//! an element of `A_{r(g1)}` (an element of `A_x` per object in degree 0).
//! The complex is unnormalized: tuples containing units are kept.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::abelian::{AbComplex, AbHom, AbelianError, Element, FinAbGroup, HomologyPresentation, IntegerMatrix, InvariantFactors};
use crate::budget::Budget;
use crate::gmodule::GModule;
use crate::groupoid::{face, nerve, nerve_size, Nerve, NerveTuple};
use crate::par::{self, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("expected a cochain of degree {expected}, got degree {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("cochain has no value at {0:?}")]
    NotTotal(NerveTuple),
    #[error("value at {0:?} does not lie in its fiber")]
    BadValue(NerveTuple),
    #[error("degree {degree} needs {needed} cochain generators, budget is {limit}")]
    Budget { degree: usize, needed: u128, limit: u128 },
    #[error("differential out of degree {degree} has {needed} matrix entries, budget is {limit}")]
    MatrixBudget { degree: usize, needed: u128, limit: u128 },
    #[error("degree {0} was not assembled")]
    NotAssembled(usize),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

impl CohomologyError {
    /// Whether a size limit was hit.
    pub fn is_budget(&self) -> bool {
        matches!(self, CohomologyError::Budget { .. } | CohomologyError::MatrixBudget { .. })
    }
}

/// A cochain keyed by nerve tuples; iteration follows the nerve order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    values: BTreeMap<NerveTuple, Element>,
}

impl Cochain {
    pub fn new(degree: usize, values: BTreeMap<NerveTuple, Element>) -> Self {
        Cochain { degree, values }
    }

    pub fn zero(a: &GModule, n: usize) -> Self {
        Cochain::from_fn(a, n, |t| a.fiber(t.anchor(a.base())).zero())
    }

    pub fn from_fn(a: &GModule, n: usize, mut f: impl FnMut(&NerveTuple) -> Element) -> Self {
        let values = nerve(a.base(), n)
            .into_iter()
            .map(|t| {
                let v = a.fiber(t.anchor(a.base())).reduce(f(&t));
                (t, v)
            })
            .collect();
        Cochain { degree: n, values }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, t: &NerveTuple) -> Option<&Element> {
        self.values.get(t)
    }

    /// Value at a string of arrows (degree ≥ 1). Panics when absent.
    pub fn at(&self, arrows: &[usize]) -> &Element {
        &self.values[&NerveTuple::Arrows(arrows.to_vec())]
    }

    /// Value at an object (degree 0). Panics when absent.
    pub fn at_object(&self, x: usize) -> &Element {
        &self.values[&NerveTuple::Object(x)]
    }

    pub fn set(&mut self, t: NerveTuple, v: Element) {
        self.values.insert(t, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NerveTuple, &Element)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn zip_with(&self, a: &GModule, other: &Cochain, op: impl Fn(&FinAbGroup, &[i64], &[i64]) -> Element) -> Cochain {
        assert_eq!(self.degree, other.degree, "degrees differ");
        let values = self
            .values
            .iter()
            .map(|(t, v)| {
                let w = &other.values[t];
                (t.clone(), op(a.fiber(t.anchor(a.base())), v, w))
            })
            .collect();
        Cochain {
            degree: self.degree,
            values,
        }
    }

    pub fn add(&self, a: &GModule, other: &Cochain) -> Cochain {
        self.zip_with(a, other, |f, x, y| f.add(x, y))
    }

    pub fn sub(&self, a: &GModule, other: &Cochain) -> Cochain {
        self.zip_with(a, other, |f, x, y| f.sub(x, y))
    }

    pub fn neg(&self, a: &GModule) -> Cochain {
        self.scale(a, -1)
    }

    pub fn scale(&self, a: &GModule, k: i64) -> Cochain {
        let values = self
            .values
            .iter()
            .map(|(t, v)| (t.clone(), a.fiber(t.anchor(a.base())).scale(k, v)))
            .collect();
        Cochain {
            degree: self.degree,
            values,
        }
    }

    pub fn is_zero(&self, a: &GModule) -> bool {
        self.values
            .iter()
            .all(|(t, v)| a.fiber(t.anchor(a.base())).is_zero(v))
    }
}

fn check_total(a: &GModule, c: &Cochain) -> Result<(), CohomologyError> {
    let g = a.base();
    for t in nerve(g, c.degree) {
        match c.get(&t) {
            None => return Err(CohomologyError::NotTotal(t)),
            Some(v) if !a.fiber(t.anchor(g)).contains(v) => return Err(CohomologyError::BadValue(t)),
            _ => {}
        }
    }
    Ok(())
}

/// `(dc)(g1..g(n+1)) = g1·c(g2..) + Σ (-1)^k c(.., gk g(k+1), ..) + (-1)^(n+1) c(g1..gn)`.
pub fn differential(a: &GModule, c: &Cochain) -> Result<Cochain, CohomologyError> {
    check_total(a, c)?;
    let g = a.base();
    let n = c.degree;
    let values = nerve(g, n + 1)
        .into_iter()
        .map(|t| {
            let fiber = a.fiber(t.anchor(g));
            let mut acc = fiber.zero();
            for i in 0..=n + 1 {
                let f = face(g, n + 1, i, &t).expect("level checked");
                let mut v = c.values[&f].clone();
                if i == 0 {
                    v = a.act(t.arrows()[0], &v);
                }
                if i % 2 == 1 {
                    v = fiber.neg(&v);
                }
                acc = fiber.add(&acc, &v);
            }
            (t, acc)
        })
        .collect();
    Ok(Cochain {
        degree: n + 1,
        values,
    })
}

fn cells(a: &GModule, n: usize) -> u128 {
    let max_rank = a.fibers().iter().map(FinAbGroup::rank).max().unwrap_or(0) as u128;
    nerve_size(a.base(), n).saturating_mul(max_rank)
}

fn check_budget(a: &GModule, n: usize, budget: &Budget) -> Result<(), CohomologyError> {
    let needed = cells(a, n);
    if needed > budget.max_cells {
        return Err(CohomologyError::Budget {
            degree: n,
            needed,
            limit: budget.max_cells,
        });
    }
    if n > 0 {
        let entries = cells(a, n - 1).saturating_mul(needed);
        if entries > budget.max_entries {
            return Err(CohomologyError::MatrixBudget {
                degree: n - 1,
                needed: entries,
                limit: budget.max_entries,
            });
        }
    }
    Ok(())
}

/// Direct sum of `A_{r(g1)}` over the nerve in canonical order.
pub fn cochain_group(a: &GModule, n: usize) -> FinAbGroup {
    let g = a.base();
    let orders: Vec<u64> = nerve(g, n)
        .iter()
        .flat_map(|t| a.fiber(t.anchor(g)).orders().to_vec())
        .collect();
    FinAbGroup::new(orders)
}

/// The matrix of `d: C^n -> C^(n+1)`.
pub fn differential_matrix(a: &GModule, n: usize) -> Result<AbHom, CohomologyError> {
    Ok(GroupoidComplex::new(a, n)?.maps[n].clone())
}

/// Same map assembled one column at a time by applying [`differential`] to
/// each generator of `C^n`.
pub fn differential_matrix_by_columns(a: &GModule, n: usize) -> AbHom {
    let source = cochain_group(a, n);
    let target = cochain_group(a, n + 1);
    let tuples = nerve(a.base(), n);
    let mut columns = Vec::with_capacity(source.rank());
    for (k, t) in tuples.iter().enumerate() {
        for j in 0..a.fiber(t.anchor(a.base())).rank() {
            let c = Cochain::from_fn(a, n, |u| {
                let mut v = a.fiber(u.anchor(a.base())).zero();
                if u == &tuples[k] {
                    v[j] = 1;
                }
                v
            });
            let dc = differential(a, &c).expect("total cochain");
            columns.push(flatten(&dc).into_iter().map(BigInt::from).collect());
        }
    }
    let m = IntegerMatrix::from_columns(target.rank(), &columns);
    AbHom::new(source, target, m).expect("shape follows the nerve")
}

fn flatten(c: &Cochain) -> Element {
    c.values.values().flat_map(|v| v.iter().copied()).collect()
}

#[derive(Clone, Debug)]
struct Layout {
    /// First generator of each tuple's block.
    offsets: Vec<usize>,
    group: FinAbGroup,
}

fn layout(a: &GModule, tuples: &[NerveTuple]) -> Layout {
    let g = a.base();
    let mut offsets = Vec::with_capacity(tuples.len());
    let mut orders = Vec::new();
    for t in tuples {
        offsets.push(orders.len());
        orders.extend_from_slice(a.fiber(t.anchor(g)).orders());
    }
    Layout {
        offsets,
        group: FinAbGroup::new(orders),
    }
}

/// `C^0 -> ... -> C^(top+1)` assembled once, with cached homology.
#[derive(Clone, Debug)]
pub struct GroupoidComplex {
    module: GModule,
    nerve: Nerve,
    layouts: Vec<Layout>,
    maps: Vec<AbHom>,
    complex: AbComplex,
}

impl GroupoidComplex {
    /// Assembles degrees `0..=top + 1`, enough for `H^0..H^top`.
    pub fn new(a: &GModule, top: usize) -> Result<Self, CohomologyError> {
        Self::with_options(a, top, &Budget::default(), Strategy::default())
    }

    pub fn with_options(a: &GModule, top: usize, budget: &Budget, strategy: Strategy) -> Result<Self, CohomologyError> {
        for n in 0..=top + 1 {
            check_budget(a, n, budget)?;
        }
        let nerve = Nerve::new(a.base(), top + 1);
        let layouts: Vec<Layout> = (0..=top + 1).map(|n| layout(a, nerve.level(n))).collect();
        let maps: Vec<AbHom> = (0..=top)
            .map(|n| assemble(a, &nerve, &layouts, n, strategy))
            .collect();
        let complex = AbComplex::new(layouts.iter().map(|l| l.group.clone()).collect(), maps.clone())?;
        Ok(GroupoidComplex {
            module: a.clone(),
            nerve,
            layouts,
            maps,
            complex,
        })
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn top(&self) -> usize {
        self.layouts.len() - 2
    }

    pub fn complex(&self) -> &AbComplex {
        &self.complex
    }

    pub fn tuples(&self, n: usize) -> &[NerveTuple] {
        self.nerve.level(n)
    }

    pub fn cochain_group(&self, n: usize) -> &FinAbGroup {
        &self.layouts[n].group
    }

    pub fn differential_matrix(&self, n: usize) -> &AbHom {
        &self.maps[n]
    }

    fn check_degree(&self, n: usize) -> Result<(), CohomologyError> {
        if n > self.top() {
            return Err(CohomologyError::NotAssembled(n));
        }
        Ok(())
    }

    pub fn cohomology(&self, n: usize) -> Result<InvariantFactors, CohomologyError> {
        self.check_degree(n)?;
        Ok(self.complex.homology_at(n)?)
    }

    pub fn presentation(&self, n: usize) -> Result<HomologyPresentation, CohomologyError> {
        self.check_degree(n)?;
        Ok(self.complex.presentation(n)?)
    }

    /// Coordinates of a cochain in the canonical order.
    pub fn flatten(&self, c: &Cochain) -> Result<Element, CohomologyError> {
        if c.degree >= self.layouts.len() {
            return Err(CohomologyError::NotAssembled(c.degree));
        }
        check_total(&self.module, c)?;
        Ok(flatten(c))
    }

    pub fn unflatten(&self, n: usize, x: &[i64]) -> Cochain {
        let lay = &self.layouts[n];
        let g = self.module.base();
        let values = self
            .nerve
            .level(n)
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let o = lay.offsets[k];
                let r = self.module.fiber(t.anchor(g)).rank();
                (t.clone(), self.module.fiber(t.anchor(g)).reduce(x[o..o + r].to_vec()))
            })
            .collect();
        Cochain { degree: n, values }
    }

    pub fn is_cocycle(&self, c: &Cochain) -> Result<bool, CohomologyError> {
        Ok(differential(&self.module, c)?.is_zero(&self.module))
    }

    /// Some `b` with `db = c`; in degree 0 only the zero cochain qualifies.
    pub fn coboundary_witness(&self, c: &Cochain) -> Result<Option<Cochain>, CohomologyError> {
        let x = self.flatten(c)?;
        if c.degree == 0 {
            return Ok(c.is_zero(&self.module).then(|| Cochain {
                degree: 0,
                values: BTreeMap::new(),
            }));
        }
        Ok(self
            .complex
            .boundary_witness(c.degree, &x)?
            .map(|b| self.unflatten(c.degree - 1, &b)))
    }

    /// Coordinates of the class of a cocycle in [`Self::presentation`]'s generators.
    pub fn class_of(&self, c: &Cochain) -> Result<Option<Vec<BigInt>>, CohomologyError> {
        self.check_degree(c.degree)?;
        let x = self.flatten(c)?;
        Ok(self.complex.presentation(c.degree)?.class_of(&x))
    }
}

/// Sparse rows of `d^n`, one block per `(n+1)`-tuple.
fn assemble(a: &GModule, nerve: &Nerve, layouts: &[Layout], n: usize, strategy: Strategy) -> AbHom {
    let g = a.base();
    let upper = nerve.level(n + 1);
    let blocks: Vec<Vec<(usize, usize, i64)>> = par::map_range(strategy, upper.len(), |row_t| {
        let t = &upper[row_t];
        let r0 = layouts[n + 1].offsets[row_t];
        let fiber = a.fiber(t.anchor(g));
        let mut entries = Vec::new();
        for i in 0..=n + 1 {
            let f = face(g, n + 1, i, t).expect("level checked");
            let col_t = nerve.position(&f).expect("faces stay in the nerve");
            let c0 = layouts[n].offsets[col_t];
            let sign = if i % 2 == 0 { 1 } else { -1 };
            if i == 0 {
                let alpha = a.action(t.arrows()[0]).matrix();
                for r in 0..alpha.rows() {
                    for c in 0..alpha.cols() {
                        let v = i64::try_from(alpha.get(r, c)).expect("action entries fit in i64");
                        if v != 0 {
                            entries.push((r0 + r, c0 + c, sign * v));
                        }
                    }
                }
            } else {
                for r in 0..fiber.rank() {
                    entries.push((r0 + r, c0 + r, sign));
                }
            }
        }
        entries
    });
    let source = layouts[n].group.clone();
    let target = layouts[n + 1].group.clone();
    let mut m = IntegerMatrix::zeros(target.rank(), source.rank());
    for (r, c, v) in blocks.into_iter().flatten() {
        m.add_to(r, c, &BigInt::from(v));
    }
    AbHom::new(source, target, m).expect("shape follows the nerve")
}

pub fn cohomology(a: &GModule, n: usize) -> Result<InvariantFactors, CohomologyError> {
    GroupoidComplex::new(a, n)?.cohomology(n)
}

pub fn is_cocycle(a: &GModule, c: &Cochain) -> Result<bool, CohomologyError> {
    Ok(differential(a, c)?.is_zero(a))
}

pub fn is_coboundary(a: &GModule, c: &Cochain) -> Result<Option<Cochain>, CohomologyError> {
    GroupoidComplex::new(a, c.degree)?.coboundary_witness(c)
}

/// `Γ_inv`: sections `x ↦ c(x)` with `g·c(s(g)) = c(r(g))`.
#[derive(Clone, Debug)]
pub struct InvariantSections {
    pub factors: InvariantFactors,
    /// One invariant section per generator of `factors`.
    pub generators: Vec<Cochain>,
}

/// Invariant sections computed component by component: a section is fixed
/// by its value at a base object, which must be fixed by the isotropy group
/// there; values elsewhere are transported along chosen arrows.
pub fn invariant_sections(a: &GModule) -> Result<InvariantSections, CohomologyError> {
    let g = a.base();
    let mut component = vec![usize::MAX; g.n_objects()];
    let mut transport = vec![usize::MAX; g.n_objects()];
    let mut bases = Vec::new();
    for x in g.objects() {
        if component[x] != usize::MAX {
            continue;
        }
        let c = bases.len();
        bases.push(x);
        for h in g.arrows_from(x) {
            let y = g.range(h);
            if component[y] == usize::MAX {
                component[y] = c;
                transport[y] = h;
            }
        }
        component[x] = c;
        transport[x] = g.unit(x);
    }
    let mut factors = InvariantFactors::trivial();
    let mut generators = Vec::new();
    for (c, &x0) in bases.iter().enumerate() {
        let fiber = a.fiber(x0).clone();
        let isotropy: Vec<usize> = g.arrows_from(x0).filter(|&h| g.range(h) == x0).collect();
        // stacked α_h - id over the isotropy group
        let r = fiber.rank();
        let target = fiber.power(isotropy.len());
        let mut m = IntegerMatrix::zeros(target.rank(), r);
        for (k, &h) in isotropy.iter().enumerate() {
            let alpha = a.action(h).matrix();
            for i in 0..r {
                for j in 0..r {
                    let mut v = alpha.get(i, j).clone();
                    if i == j {
                        v -= 1;
                    }
                    m.set(k * r + i, j, v);
                }
            }
        }
        let hom = AbHom::new(fiber.clone(), target, m)?;
        let local = AbComplex::new(vec![fiber, hom.target().clone()], vec![hom])?;
        let pres = local.presentation(0)?;
        factors = direct_sum(&factors, &pres.factors);
        for v in pres.generators() {
            generators.push(Cochain::from_fn(a, 0, |t| {
                let NerveTuple::Object(y) = t else { unreachable!() };
                if component[*y] == c {
                    a.act(transport[*y], v)
                } else {
                    a.fiber(*y).zero()
                }
            }));
        }
    }
    Ok(InvariantSections {
        factors: factors.canonical(),
        generators,
    })
}

fn direct_sum(a: &InvariantFactors, b: &InvariantFactors) -> InvariantFactors {
    let mut torsion = a.torsion.clone();
    torsion.extend(b.torsion.iter().cloned());
    InvariantFactors {
        torsion,
        free_rank: a.free_rank + b.free_rank,
    }
    .canonical()
}
