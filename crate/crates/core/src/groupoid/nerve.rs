use std::collections::HashMap;

use super::{FiniteGroupoid, GroupoidError, MonotoneMap};

/// Element of the nerve: an object at level 0, otherwise a composable
/// string `(g1, ..., gn)` with `s(gi) = r(g(i+1))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NerveTuple {
    Object(usize),
    Arrows(Vec<usize>),
}

impl NerveTuple {
    pub fn level(&self) -> usize {
        match self {
            NerveTuple::Object(_) => 0,
            NerveTuple::Arrows(a) => a.len(),
        }
    }

    pub fn arrows(&self) -> &[usize] {
        match self {
            NerveTuple::Object(_) => &[],
            NerveTuple::Arrows(a) => a,
        }
    }

    /// `r(g1)`, or the object itself at level 0. Cochain values live over it.
    pub fn anchor(&self, g: &FiniteGroupoid) -> usize {
        match self {
            NerveTuple::Object(x) => *x,
            NerveTuple::Arrows(a) => g.range(a[0]),
        }
    }

    /// The vertices `x0 = r(g1), x1 = s(g1), ..., xn = s(gn)`.
    pub fn vertices(&self, g: &FiniteGroupoid) -> Vec<usize> {
        match self {
            NerveTuple::Object(x) => vec![*x],
            NerveTuple::Arrows(a) => std::iter::once(g.range(a[0]))
                .chain(a.iter().map(|&h| g.source(h)))
                .collect(),
        }
    }

    pub fn is_composable(&self, g: &FiniteGroupoid) -> bool {
        match self {
            NerveTuple::Object(x) => *x < g.n_objects(),
            NerveTuple::Arrows(a) => {
                !a.is_empty()
                    && a.iter().all(|&h| h < g.n_arrows())
                    && a.windows(2).all(|w| g.composable(w[0], w[1]))
            }
        }
    }
}

/// All composable `n`-tuples in lexicographic order of arrow ids.
pub fn nerve(g: &FiniteGroupoid, n: usize) -> Vec<NerveTuple> {
    if n == 0 {
        return g.objects().map(NerveTuple::Object).collect();
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(g: &FiniteGroupoid, n: usize, cur: &mut Vec<usize>, out: &mut Vec<NerveTuple>) {
        if cur.len() == n {
            out.push(NerveTuple::Arrows(cur.clone()));
            return;
        }
        for h in g.arrows() {
            if cur.last().is_none_or(|&p| g.composable(p, h)) {
                cur.push(h);
                rec(g, n, cur, out);
                cur.pop();
            }
        }
    }
    rec(g, n, &mut cur, &mut out);
    out
}

/// Number of composable `n`-tuples, without materializing them.
pub fn nerve_size(g: &FiniteGroupoid, n: usize) -> u128 {
    if n == 0 {
        return g.n_objects() as u128;
    }
    // paths of length n: count by source object of the last arrow
    let mut by_source: Vec<u128> = vec![0; g.n_objects()];
    for h in g.arrows() {
        by_source[g.source(h)] += 1;
    }
    for _ in 1..n {
        let mut next = vec![0u128; g.n_objects()];
        for h in g.arrows() {
            next[g.source(h)] = next[g.source(h)].saturating_add(by_source[g.range(h)]);
        }
        by_source = next;
    }
    by_source.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

fn check_level(t: &NerveTuple, n: usize) -> Result<(), GroupoidError> {
    if t.level() != n {
        return Err(GroupoidError::LevelMismatch {
            expected: n,
            got: t.level(),
        });
    }
    Ok(())
}

/// Face map `ε̃_i` from level `n` to level `n - 1`.
pub fn face(g: &FiniteGroupoid, n: usize, i: usize, t: &NerveTuple) -> Result<NerveTuple, GroupoidError> {
    check_level(t, n)?;
    if n == 0 || i > n {
        return Err(GroupoidError::IndexOutOfRange { level: n, index: i });
    }
    let a = t.arrows();
    if n == 1 {
        return Ok(NerveTuple::Object(if i == 0 { g.source(a[0]) } else { g.range(a[0]) }));
    }
    let mut out = Vec::with_capacity(n - 1);
    if i == 0 {
        out.extend_from_slice(&a[1..]);
    } else if i == n {
        out.extend_from_slice(&a[..n - 1]);
    } else {
        out.extend_from_slice(&a[..i - 1]);
        out.push(g.compose(a[i - 1], a[i]));
        out.extend_from_slice(&a[i + 1..]);
    }
    Ok(NerveTuple::Arrows(out))
}

/// Degeneracy map `η̃_i` from level `n` to level `n + 1`.
pub fn degeneracy(
    g: &FiniteGroupoid,
    n: usize,
    i: usize,
    t: &NerveTuple,
) -> Result<NerveTuple, GroupoidError> {
    check_level(t, n)?;
    if i > n {
        return Err(GroupoidError::IndexOutOfRange { level: n, index: i });
    }
    let out = match t {
        NerveTuple::Object(x) => vec![g.unit(*x)],
        NerveTuple::Arrows(a) => {
            let mut out = Vec::with_capacity(n + 1);
            if i == 0 {
                out.push(g.unit(g.range(a[0])));
                out.extend_from_slice(a);
            } else {
                out.extend_from_slice(&a[..i]);
                out.push(g.unit(g.source(a[i - 1])));
                out.extend_from_slice(&a[i..]);
            }
            out
        }
    };
    Ok(NerveTuple::Arrows(out))
}

/// Outcome of [`check_simplicial_identities`].
#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// Checks every face/degeneracy identity on every element of `G_n`, `n <= max_level`.
pub fn check_simplicial_identities(g: &FiniteGroupoid, max_level: usize) -> IdentityReport {
    let mut r = IdentityReport::default();
    let mut expect = |name: &str, t: &NerveTuple, lhs: NerveTuple, rhs: NerveTuple| {
        r.checked += 1;
        if lhs != rhs {
            r.failures.push(format!("{name} at {t:?}: {lhs:?} != {rhs:?}"));
        }
    };
    let f = |n, i, t: &NerveTuple| face(g, n, i, t).expect("valid face");
    let s = |n, i, t: &NerveTuple| degeneracy(g, n, i, t).expect("valid degeneracy");
    for n in 0..=max_level {
        for t in nerve(g, n) {
            if n >= 2 {
                for j in 0..=n {
                    for i in 0..j {
                        // ε_i ε_j = ε_{j-1} ε_i
                        expect("ee", &t, f(n - 1, i, &f(n, j, &t)), f(n - 1, j - 1, &f(n, i, &t)));
                    }
                }
            }
            if n < max_level {
                for j in 0..=n {
                    let sj = s(n, j, &t);
                    for i in 0..=j {
                        // η_i η_j = η_{j+1} η_i
                        expect("ss", &t, s(n + 1, i, &sj), s(n + 1, j + 1, &s(n, i, &t)));
                    }
                    for i in 0..=n + 1 {
                        let lhs = f(n + 1, i, &sj);
                        if i == j || i == j + 1 {
                            expect("es=id", &t, lhs, t.clone());
                        } else if i < j {
                            // ε_i η_j = η_{j-1} ε_i
                            expect("es<", &t, lhs, s(n - 1, j - 1, &f(n, i, &t)));
                        } else {
                            // ε_i η_j = η_j ε_{i-1}
                            expect("es>", &t, lhs, s(n - 1, j, &f(n, i - 1, &t)));
                        }
                    }
                }
            }
        }
    }
    r
}

/// `f̃` for an injective `f: [k] -> [n]`: products `g_{f(j-1)+1} ⋯ g_{f(j)}`
/// for the arrows, vertex `x_{f(0)}` at `k = 0`.
fn injective_map(g: &FiniteGroupoid, f: &MonotoneMap, t: &NerveTuple) -> NerveTuple {
    let k = f.domain();
    if k == 0 {
        return NerveTuple::Object(t.vertices(g)[f.apply(0)]);
    }
    let a = t.arrows();
    let arrows = (1..=k)
        .map(|j| {
            let (lo, hi) = (f.apply(j - 1), f.apply(j));
            a[lo + 1..hi]
                .iter()
                .fold(a[lo], |acc, &h| g.compose(acc, h))
        })
        .collect();
    NerveTuple::Arrows(arrows)
}

/// `f̃: G_n -> G_k` for a monotone `f: [k] -> [n]`, contravariant in `f`.
///
/// Injective maps use the product formula; general maps are factored as
/// `f = mono ∘ epi` and the surjective part is applied as degeneracies.
pub fn simplicial_map(g: &FiniteGroupoid, f: &MonotoneMap, t: &NerveTuple) -> Result<NerveTuple, GroupoidError> {
    check_level(t, f.codomain())?;
    if f.is_injective() {
        return Ok(injective_map(g, f, t));
    }
    let (epi, mono) = f.epi_mono();
    let mut cur = injective_map(g, &mono, t);
    // insert a unit wherever consecutive values of epi coincide
    for p in 1..=epi.domain() {
        if epi.apply(p - 1) == epi.apply(p) {
            let lvl = cur.level();
            cur = degeneracy(g, lvl, p - 1, &cur)?;
        }
    }
    Ok(cur)
}

/// Nerve levels `0..=max_level` with position lookup.
#[derive(Clone, Debug)]
pub struct Nerve {
    levels: Vec<Vec<NerveTuple>>,
    index: Vec<HashMap<NerveTuple, usize>>,
}

impl Nerve {
    pub fn new(g: &FiniteGroupoid, max_level: usize) -> Self {
        let levels: Vec<Vec<NerveTuple>> = (0..=max_level).map(|n| nerve(g, n)).collect();
        let index = levels
            .iter()
            .map(|l| l.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();
        Nerve { levels, index }
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &[NerveTuple] {
        &self.levels[n]
    }

    pub fn position(&self, t: &NerveTuple) -> Option<usize> {
        self.index.get(t.level())?.get(t).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic_group, pair_groupoid};
    use super::*;

    fn arrows(v: &[usize]) -> NerveTuple {
        NerveTuple::Arrows(v.to_vec())
    }

    #[test]
    fn nerve_counts() {
        assert_eq!(nerve(&cyclic_group(2), 2).len(), 4);
        assert_eq!(nerve(&pair_groupoid(2), 1).len(), 4);
        assert_eq!(nerve(&pair_groupoid(2), 2).len(), 8);
        for n in 0..4 {
            assert_eq!(nerve(&pair_groupoid(3), n).len() as u128, nerve_size(&pair_groupoid(3), n));
        }
    }

    #[test]
    fn faces_on_c2() {
        let c2 = cyclic_group(2);
        // arrow 1 is the generator s, s*s = e (arrow 0)
        assert_eq!(face(&c2, 2, 1, &arrows(&[1, 1])).unwrap(), arrows(&[0]));
        assert_eq!(face(&c2, 2, 0, &arrows(&[0, 1])).unwrap(), arrows(&[1]));
        assert_eq!(face(&c2, 1, 1, &arrows(&[1])).unwrap(), NerveTuple::Object(0));
        assert!(face(&c2, 2, 3, &arrows(&[1, 1])).is_err());
        assert!(face(&c2, 1, 0, &arrows(&[1, 1])).is_err());
    }

    #[test]
    fn degeneracies_on_c2() {
        let c2 = cyclic_group(2);
        assert_eq!(degeneracy(&c2, 0, 0, &NerveTuple::Object(0)).unwrap(), arrows(&[0]));
        assert_eq!(degeneracy(&c2, 1, 0, &arrows(&[1])).unwrap(), arrows(&[0, 1]));
        assert_eq!(degeneracy(&c2, 1, 1, &arrows(&[1])).unwrap(), arrows(&[1, 0]));
        assert!(degeneracy(&c2, 1, 2, &arrows(&[1])).is_err());
    }

    #[test]
    fn simplicial_map_examples() {
        let c3 = cyclic_group(3);
        let t = arrows(&[1, 1, 2]);
        assert_eq!(simplicial_map(&c3, &MonotoneMap::identity(3), &t).unwrap(), t);
        let f = MonotoneMap::new(vec![0, 3], 3).unwrap();
        // 1 + 1 + 2 = 4 = 1 mod 3
        assert_eq!(simplicial_map(&c3, &f, &t).unwrap(), arrows(&[1]));
        let p = pair_groupoid(3);
        let t = NerveTuple::Arrows(vec![pair_index(3, 0, 1), pair_index(3, 1, 2)]);
        let constant = MonotoneMap::constant(0, 2, 2);
        // s(g2) = object 2
        assert_eq!(simplicial_map(&p, &constant, &t).unwrap(), NerveTuple::Object(2));
        assert!(simplicial_map(&p, &MonotoneMap::identity(1), &t).is_err());
    }

    fn sample_groupoids() -> Vec<FiniteGroupoid> {
        use super::super::{product, unit_groupoid};
        vec![cyclic_group(3), pair_groupoid(2), product(&cyclic_group(2), &pair_groupoid(2)), unit_groupoid(2)]
    }

    #[test]
    fn simplicial_identities() {
        for g in sample_groupoids() {
            let report = check_simplicial_identities(&g, 4);
            assert!(report.failures.is_empty(), "{:?}", report.failures);
            assert!(report.checked > 0);
        }
    }

    #[test]
    fn simplicial_map_matches_faces_and_degeneracies() {
        for g in sample_groupoids() {
            for n in 1..4 {
                for t in nerve(&g, n) {
                    for i in 0..=n {
                        let f = MonotoneMap::face(n, i);
                        assert_eq!(simplicial_map(&g, &f, &t).unwrap(), face(&g, n, i, &t).unwrap());
                        let s = MonotoneMap::degeneracy(n, i);
                        assert_eq!(simplicial_map(&g, &s, &t).unwrap(), degeneracy(&g, n, i, &t).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn simplicial_map_is_functorial() {
        let g = pair_groupoid(2);
        for n in 0..4 {
            for m in 0..4 {
                for k in 0..3 {
                    for f in MonotoneMap::all(m, n) {
                        for h in MonotoneMap::all(k, m) {
                            let fh = f.after(&h);
                            for t in nerve(&g, n) {
                                let lhs = simplicial_map(&g, &fh, &t).unwrap();
                                let rhs = simplicial_map(&g, &h, &simplicial_map(&g, &f, &t).unwrap()).unwrap();
                                assert_eq!(lhs, rhs);
                                // vertices of f̃(t) are the x_{f(j)}
                                let v = t.vertices(&g);
                                let expected: Vec<usize> = f.values().iter().map(|&j| v[j]).collect();
                                assert_eq!(simplicial_map(&g, &f, &t).unwrap().vertices(&g), expected);
                            }
                        }
                    }
                }
            }
        }
    }

    fn pair_index(m: usize, range: usize, source: usize) -> usize {
        // pair_groupoid arrows are ordered by (range, source)
        range * m + source
    }
}
