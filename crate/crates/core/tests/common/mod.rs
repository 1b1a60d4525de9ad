//! Reference computations that share nothing with the library's linear
//! algebra: cochains are enumerated one by one and the differential is
//! evaluated straight from its formula.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use groupoid_cohomology::cohomology::Cochain;
use groupoid_cohomology::groupoid::NerveTuple;
use groupoid_cohomology::{GModule, InvariantFactors};

/// Composable tuples `(g1, ..., gn)` with `s(gi) = r(gi+1)`; level 0 is
/// represented by one-element object tuples.
pub fn tuples(a: &GModule, n: usize) -> Vec<Vec<usize>> {
    let g = a.base();
    if n == 0 {
        return g.objects().map(|x| vec![x]).collect();
    }
    let mut out: Vec<Vec<usize>> = g.arrows().map(|h| vec![h]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for t in &out {
            let last = *t.last().unwrap();
            for h in g.arrows() {
                if g.range(h) == g.source(last) {
                    let mut u = t.clone();
                    u.push(h);
                    next.push(u);
                }
            }
        }
        out = next;
    }
    out
}

fn anchor(a: &GModule, n: usize, t: &[usize]) -> usize {
    if n == 0 {
        t[0]
    } else {
        a.base().range(t[0])
    }
}

fn reduce(orders: &[u64], v: &mut [i64]) {
    for (x, &m) in v.iter_mut().zip(orders) {
        if m != 0 {
            *x = x.rem_euclid(m as i64);
        }
    }
}

/// Brute-force cochains of one degree with a finite module.
pub struct Level {
    pub n: usize,
    pub tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    offsets: Vec<usize>,
    orders: Vec<u64>,
}

impl Level {
    pub fn new(a: &GModule, n: usize) -> Self {
        let tuples = tuples(a, n);
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let mut offsets = Vec::new();
        let mut orders = Vec::new();
        for t in &tuples {
            offsets.push(orders.len());
            orders.extend_from_slice(a.fiber(anchor(a, n, t)).orders());
        }
        Level {
            n,
            tuples,
            index,
            offsets,
            orders,
        }
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    /// Number of cochains; `None` when a fiber is infinite or it overflows.
    pub fn count(&self) -> Option<u64> {
        self.orders
            .iter()
            .try_fold(1u64, |acc, &m| if m == 0 { None } else { acc.checked_mul(m) })
    }

    /// Every cochain as a flat coordinate vector.
    pub fn all(&self) -> Vec<Vec<i64>> {
        let total = self.count().expect("finite coefficients");
        let mut out = Vec::with_capacity(total as usize);
        let mut v = vec![0i64; self.len()];
        for _ in 0..total {
            out.push(v.clone());
            for (x, &m) in v.iter_mut().zip(&self.orders) {
                *x += 1;
                if *x < m as i64 {
                    break;
                }
                *x = 0;
            }
        }
        out
    }

    pub fn value<'a>(&self, c: &'a [i64], t: &[usize]) -> &'a [i64] {
        let i = self.index[t];
        let end = self.offsets.get(i + 1).copied().unwrap_or(self.orders.len());
        &c[self.offsets[i]..end]
    }

    pub fn to_cochain(&self, a: &GModule, c: &[i64]) -> Cochain {
        let n = self.n;
        Cochain::from_fn(a, n, |t| match t {
            NerveTuple::Object(x) => self.value(c, &[*x]).to_vec(),
            NerveTuple::Arrows(arrows) => self.value(c, arrows).to_vec(),
        })
    }
}

/// `dφ` on level `n + 1`, written out term by term.
pub fn differential(a: &GModule, from: &Level, to: &Level, c: &[i64]) -> Vec<i64> {
    let g = a.base();
    let n = from.n;
    let mut out = vec![0i64; to.len()];
    for (i, t) in to.tuples.iter().enumerate() {
        let x = g.range(t[0]);
        let width = a.fiber(x).orders().len();
        let mut acc = vec![0i64; width];
        let mut add = |v: &[i64], sign: i64| {
            for (s, y) in acc.iter_mut().zip(v) {
                *s += sign * y;
            }
        };
        if n == 0 {
            add(&a.act(t[0], from.value(c, &[g.source(t[0])])), 1);
            add(from.value(c, &[x]), -1);
        } else {
            add(&a.act(t[0], from.value(c, &t[1..])), 1);
            for k in 0..n {
                let mut face = t[..k].to_vec();
                face.push(g.compose(t[k], t[k + 1]));
                face.extend_from_slice(&t[k + 2..]);
                add(from.value(c, &face), if k % 2 == 0 { -1 } else { 1 });
            }
            add(from.value(c, &t[..n]), if n.is_multiple_of(2) { -1 } else { 1 });
        }
        reduce(a.fiber(x).orders(), &mut acc);
        out[to.offsets[i]..to.offsets[i] + width].copy_from_slice(&acc);
    }
    out
}

fn scale(orders: &[u64], k: i64, c: &[i64]) -> Vec<i64> {
    let mut v: Vec<i64> = c.iter().map(|x| k * x).collect();
    reduce(orders, &mut v);
    v
}

/// Cocycles and coboundaries of degree `n`, found by enumeration.
pub struct BruteForce {
    pub level: Level,
    pub cocycles: Vec<Vec<i64>>,
    pub coboundaries: HashSet<Vec<i64>>,
}

impl BruteForce {
    pub fn new(a: &GModule, n: usize) -> Self {
        let level = Level::new(a, n);
        let next = Level::new(a, n + 1);
        let cocycles = level
            .all()
            .into_iter()
            .filter(|c| differential(a, &level, &next, c).iter().all(|&x| x == 0))
            .collect();
        let coboundaries = if n == 0 {
            std::iter::once(vec![0; level.len()]).collect()
        } else {
            let prev = Level::new(a, n - 1);
            prev.all().iter().map(|c| differential(a, &prev, &level, c)).collect()
        };
        BruteForce {
            level,
            cocycles,
            coboundaries,
        }
    }

    pub fn order(&self) -> u64 {
        (self.cocycles.len() / self.coboundaries.len()) as u64
    }

    pub fn is_coboundary(&self, c: &[i64]) -> bool {
        self.coboundaries.contains(c)
    }

    /// `|H[k]|` for `k = 1..=up_to`, which pins down a finite abelian group.
    pub fn torsion_profile(&self, up_to: u64) -> Vec<u64> {
        (1..=up_to)
            .map(|k| {
                let killed = self
                    .cocycles
                    .iter()
                    .filter(|z| self.is_coboundary(&scale(&self.level.orders, k as i64, z)))
                    .count();
                (killed / self.coboundaries.len()) as u64
            })
            .collect()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `|H[k]|` of a finite group given by invariant factors.
pub fn profile_of(f: &InvariantFactors, up_to: u64) -> Vec<u64> {
    assert!(f.is_finite());
    let torsion: Vec<u64> = f.torsion.iter().map(|t| u64::try_from(t.clone()).unwrap()).collect();
    (1..=up_to).map(|k| torsion.iter().map(|&d| gcd(k, d)).product()).collect()
}

/// `H^n(C_m, Z)` with trivial action from the periodic resolution
/// `... -> Z[C_m] --N--> Z[C_m] --(t-1)--> Z[C_m] -> Z`. Applying
/// `Hom(-, Z)` leaves `Z --0--> Z --m--> Z --0--> Z --m--> ...`.
pub fn cyclic_integral(m: u64, n: usize) -> (Vec<u64>, usize) {
    let map = |k: usize| if k.is_multiple_of(2) { 0 } else { m };
    let outgoing = map(n);
    let incoming = if n == 0 { 0 } else { map(n - 1) };
    match (outgoing, incoming) {
        (0, 0) => (vec![], 1),
        (0, 1) => (vec![], 0),
        (0, d) => (vec![d], 0),
        _ => (vec![], 0),
    }
}
