//! Seeded generators of small groupoids and modules for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::abelian::{AbHom, FinAbGroup, IntegerMatrix};
use crate::classify::search::extend_morphism;
use crate::gmodule::GModule;
use crate::groupoid::{
    action_groupoid, cyclic_group, disjoint_union, pair_groupoid, product, unit_groupoid, FiniteGroupoid, GSet,
};

/// A random groupoid with between 1 and `max_arrows` arrows.
pub fn random_groupoid<R: Rng>(rng: &mut R, max_arrows: usize) -> FiniteGroupoid {
    assert!(max_arrows >= 1);
    loop {
        let g = match rng.gen_range(0..6) {
            0 => cyclic_group(rng.gen_range(1..=max_arrows.min(8))),
            1 => {
                let m = (1..=4).filter(|m| m * m <= max_arrows).max().unwrap_or(1);
                pair_groupoid(rng.gen_range(1..=m))
            }
            2 => unit_groupoid(rng.gen_range(1..=max_arrows.min(4))),
            3 => {
                let a = random_groupoid(rng, (max_arrows / 2).max(1));
                let b = random_groupoid(rng, (max_arrows / 2).max(1));
                if a.n_arrows() * b.n_arrows() > max_arrows {
                    continue;
                }
                product(&a, &b)
            }
            4 => {
                let a = random_groupoid(rng, max_arrows);
                if a.n_arrows() >= max_arrows {
                    continue;
                }
                let b = random_groupoid(rng, max_arrows - a.n_arrows());
                disjoint_union(&a, &b)
            }
            _ => match random_action_groupoid(rng, max_arrows) {
                Some(g) => g,
                None => continue,
            },
        };
        if g.n_arrows() <= max_arrows {
            return g;
        }
    }
}

/// `C_n ⋉ Z` for a cyclic group rotating a disjoint union of orbits.
fn random_action_groupoid<R: Rng>(rng: &mut R, max_arrows: usize) -> Option<FiniteGroupoid> {
    let n = rng.gen_range(1..=4usize);
    let mut orbit_sizes = Vec::new();
    let mut points = 0;
    while orbit_sizes.is_empty() || rng.gen_bool(0.4) {
        let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        let d = *divisors.choose(rng).expect("1 divides n");
        orbit_sizes.push(d);
        points += d;
    }
    if n * points > max_arrows {
        return None;
    }
    let c = cyclic_group(n);
    let mut act = vec![vec![None; points]; n];
    let mut start = 0;
    for &d in &orbit_sizes {
        for (k, row) in act.iter_mut().enumerate() {
            for i in 0..d {
                row[start + i] = Some(start + (i + k) % d);
            }
        }
        start += d;
    }
    let z = GSet::new(&c, vec![0; points], act).ok()?;
    action_groupoid(&c, &z).ok()
}

/// An automorphism of finite order together with the group it acts on.
struct Twist {
    group: FinAbGroup,
    /// Order of the automorphism.
    order: usize,
    matrix: Vec<Vec<i64>>,
    /// An alternative presentation of the group with isomorphisms to and from it.
    alternative: Option<(FinAbGroup, Vec<Vec<i64>>, Vec<Vec<i64>>)>,
}

fn twists(allow_infinite: bool) -> Vec<Twist> {
    let crt = Some((
        FinAbGroup::new(vec![2, 3]),
        vec![vec![1], vec![1]],
        vec![vec![3, 4]],
    ));
    let mut out = vec![
        Twist { group: FinAbGroup::cyclic(2), order: 1, matrix: vec![vec![1]], alternative: None },
        Twist { group: FinAbGroup::cyclic(3), order: 1, matrix: vec![vec![1]], alternative: None },
        Twist { group: FinAbGroup::cyclic(3), order: 2, matrix: vec![vec![-1]], alternative: None },
        Twist { group: FinAbGroup::cyclic(4), order: 2, matrix: vec![vec![-1]], alternative: None },
        Twist { group: FinAbGroup::cyclic(5), order: 4, matrix: vec![vec![2]], alternative: None },
        Twist { group: FinAbGroup::cyclic(6), order: 2, matrix: vec![vec![-1]], alternative: crt.clone() },
        Twist { group: FinAbGroup::cyclic(6), order: 1, matrix: vec![vec![1]], alternative: crt },
        Twist {
            group: FinAbGroup::new(vec![2, 2]),
            order: 2,
            matrix: vec![vec![0, 1], vec![1, 0]],
            alternative: None,
        },
    ];
    if allow_infinite {
        out.push(Twist { group: FinAbGroup::integers(), order: 2, matrix: vec![vec![-1]], alternative: None });
        out.push(Twist { group: FinAbGroup::integers(), order: 1, matrix: vec![vec![1]], alternative: None });
    }
    out
}

fn hom(source: &FinAbGroup, target: &FinAbGroup, rows: &[Vec<i64>]) -> AbHom {
    AbHom::new(source.clone(), target.clone(), IntegerMatrix::from_rows(rows)).expect("generator shapes are consistent")
}

fn power(h: &AbHom, k: usize) -> AbHom {
    let mut out = AbHom::identity(h.source().clone());
    for _ in 0..k {
        out = h.compose(&out).expect("endomorphism");
    }
    out
}

/// A random module on `g`: a twisting group `B` with an automorphism `u`
/// of order `m`, a random morphism `χ: G -> C_m`, and `α_g = u^χ(g)`,
/// optionally conjugated into another presentation of `B` at some objects.
pub fn random_module<R: Rng>(rng: &mut R, g: &FiniteGroupoid, allow_infinite: bool) -> GModule {
    let all = twists(allow_infinite);
    let t = all.choose(rng).expect("nonempty list");
    let cm = cyclic_group(t.order);
    let chi = random_character(rng, g, &cm);
    let u = hom(&t.group, &t.group, &t.matrix);
    // per object: (fiber, to-iso B -> fiber, from-iso fiber -> B)
    let id = AbHom::identity(t.group.clone());
    let presentations: Vec<(FinAbGroup, AbHom, AbHom)> = g
        .objects()
        .map(|_| match &t.alternative {
            Some((alt, to, from)) if rng.gen_bool(0.5) => {
                (alt.clone(), hom(&t.group, alt, to), hom(alt, &t.group, from))
            }
            _ => (t.group.clone(), id.clone(), id.clone()),
        })
        .collect();
    let actions = g
        .arrows()
        .map(|a| {
            let (_, to, _) = &presentations[g.range(a)];
            let (_, _, from) = &presentations[g.source(a)];
            let twist = power(&u, chi[a]);
            to.compose(&twist.compose(from).expect("shapes agree")).expect("shapes agree")
        })
        .collect();
    let fibers = presentations.into_iter().map(|(f, _, _)| f).collect();
    GModule::new(g.clone(), fibers, actions).expect("generated module has consistent shapes")
}

/// Arrow map of a random morphism `G -> C_m` (values are exponents).
fn random_character<R: Rng>(rng: &mut R, g: &FiniteGroupoid, cm: &FiniteGroupoid) -> Vec<usize> {
    let m = cm.n_arrows();
    let mut init = vec![None; g.n_arrows()];
    for x in g.objects() {
        init[g.unit(x)] = Some(0);
    }
    let order: Vec<Vec<usize>> = g
        .arrows()
        .map(|_| {
            let mut c: Vec<usize> = (0..m).collect();
            c.shuffle(rng);
            c
        })
        .collect();
    extend_morphism(g, cm, init, &|a| order[a].clone()).expect("the trivial character always exists")
}

/// Uniformly random element of a finite group; small integers for `Z`.
pub fn random_element<R: Rng>(rng: &mut R, group: &FinAbGroup) -> Vec<i64> {
    group
        .orders()
        .iter()
        .map(|&d| if d == 0 { rng.gen_range(-3..=3) } else { rng.gen_range(0..d as i64) })
        .collect()
}

/// Random subsets of `0..n` whose union is everything, at most `max_sets`.
pub fn random_covering_sets<R: Rng>(rng: &mut R, n: usize, max_sets: usize) -> Vec<Vec<usize>> {
    let k = rng.gen_range(1..=max_sets.max(1));
    let mut sets = vec![Vec::new(); k];
    for x in 0..n {
        sets[rng.gen_range(0..k)].push(x);
        for s in sets.iter_mut() {
            if rng.gen_bool(0.25) && !s.contains(&x) {
                s.push(x);
            }
        }
    }
    for s in sets.iter_mut() {
        s.sort_unstable();
    }
    sets
}
