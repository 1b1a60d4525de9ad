use groupoid_cohomology::abelian::{smith_normal_form, AbComplex, AbHom, FinAbGroup, IntegerMatrix, InvariantFactors};
use groupoid_cohomology::classify::{
    cocycle_from_extension, cocycle_from_torsor, equivariant_section, ext_classes, extension_from_cocycle,
    is_strictly_trivial, is_torsor_isomorphism, torsor_from_cocycle,
};
use groupoid_cohomology::cohomology::is_coboundary;
use groupoid_cohomology::groupoid::{
    cover_groupoid, cyclic_group, nerve, pair_groupoid, simplicial_map, GroupoidTables, MonotoneMap, ObjectCover,
};
use groupoid_cohomology::random::{random_covering_sets, random_groupoid, random_module};
use groupoid_cohomology::{
    cohomology, constant_module, pullback_module, validate_module, FiniteGroupoid, GroupoidComplex,
    GroupoidMorphism,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_group() -> impl Strategy<Value = FinAbGroup> {
    proptest::collection::vec(prop_oneof![Just(2u64), Just(3), Just(4), Just(6)], 0..=2).prop_map(FinAbGroup::new)
}

/// A random well-defined hom: entry `(i, j)` is a multiple of `b_i / gcd(a_j, b_i)`.
fn random_hom(r: &mut ChaCha8Rng, a: &FinAbGroup, b: &FinAbGroup) -> AbHom {
    let rows: Vec<Vec<i64>> = b
        .orders()
        .iter()
        .map(|&bi| {
            a.orders()
                .iter()
                .map(|&aj| {
                    let step = bi / num_integer::gcd(aj, bi);
                    (r.gen_range(0..bi.max(1)) as i64 / step as i64) * step as i64
                })
                .collect()
        })
        .collect();
    let m = if rows.is_empty() { IntegerMatrix::zeros(0, a.rank()) } else { IntegerMatrix::from_rows(&rows) };
    AbHom::new(a.clone(), b.clone(), m).unwrap()
}

/// `|H[k]|` for k = 1..=12 of `ker g / im f`, by listing elements.
fn brute_homology(f: &AbHom, g: &AbHom) -> Vec<u64> {
    let image: std::collections::HashSet<Vec<i64>> = f.source().elements().iter().map(|x| f.apply(x)).collect();
    let middle = f.target();
    let cycles: Vec<Vec<i64>> = middle.elements().into_iter().filter(|y| g.target().is_zero(&g.apply(y))).collect();
    (1..=12)
        .map(|k| {
            let n = cycles.iter().filter(|y| image.contains(&middle.scale(k, y))).count();
            (n / image.len()) as u64
        })
        .collect()
}

fn profile(f: &InvariantFactors) -> Vec<u64> {
    let t: Vec<u64> = f.torsion.iter().map(|d| u64::try_from(d.clone()).unwrap()).collect();
    (1..=12u64).map(|k| t.iter().map(|&d| num_integer::gcd(k, d)).product()).collect()
}

/// `g` with objects and arrows renumbered, and the morphism back to `g`.
fn relabel(g: &FiniteGroupoid, r: &mut ChaCha8Rng) -> (FiniteGroupoid, GroupoidMorphism) {
    let mut objects: Vec<usize> = g.objects().collect();
    let mut arrows: Vec<usize> = g.arrows().collect();
    objects.shuffle(r);
    arrows.shuffle(r);
    // new id i stands for old id objects[i] / arrows[i]
    let mut new_obj = vec![0; objects.len()];
    let mut new_arrow = vec![0; arrows.len()];
    for (i, &x) in objects.iter().enumerate() {
        new_obj[x] = i;
    }
    for (i, &h) in arrows.iter().enumerate() {
        new_arrow[h] = i;
    }
    let n = arrows.len();
    let mut comp = vec![None; n * n];
    for (i, &p) in arrows.iter().enumerate() {
        for (j, &q) in arrows.iter().enumerate() {
            comp[i * n + j] = g.try_compose(p, q).map(|pq| new_arrow[pq]);
        }
    }
    let h = FiniteGroupoid::from_tables(GroupoidTables {
        n_objects: objects.len(),
        src: arrows.iter().map(|&a| new_obj[g.source(a)]).collect(),
        tgt: arrows.iter().map(|&a| new_obj[g.range(a)]).collect(),
        unit: objects.iter().map(|&x| new_arrow[g.unit(x)]).collect(),
        comp,
        inv: None,
        object_names: None,
        arrow_names: None,
    })
    .unwrap();
    (h, GroupoidMorphism { object_map: objects, arrow_map: arrows })
}

#[test]
fn simplicial_maps_compose_contravariantly() {
    for g in [cyclic_group(2), pair_groupoid(2)] {
        for n in 0..=4 {
            let tuples = nerve(&g, n);
            for m in 0..=4 {
                let outer = MonotoneMap::all(m, n);
                for k in 0..=4 {
                    let inner = MonotoneMap::all(k, m);
                    for h in &outer {
                        for f in &inner {
                            let hf = h.after(f);
                            for t in &tuples {
                                let direct = simplicial_map(&g, &hf, t).unwrap();
                                let staged = simplicial_map(&g, f, &simplicial_map(&g, h, t).unwrap()).unwrap();
                                assert_eq!(direct, staged);
                            }
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_diagonal_and_equivalent(rows in 1usize..5, cols in 1usize..5, entries in proptest::collection::vec(-20i64..21, 16)) {
        let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| entries[i * 4 + j]).collect()).collect();
        let m = IntegerMatrix::from_rows(&data);
        let (s, u, v) = smith_normal_form(&m);
        prop_assert_eq!(u.mul(&m).unwrap().mul(&v).unwrap(), s.clone());
        let diag: Vec<BigInt> = (0..rows.min(cols)).map(|i| s.get(i, i).clone()).collect();
        for i in 0..rows {
            for j in 0..cols {
                if i != j {
                    prop_assert_eq!(s.get(i, j), &BigInt::from(0));
                }
            }
        }
        for w in diag.windows(2) {
            if w[1] != BigInt::from(0) {
                prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
            }
        }
    }

    #[test]
    fn zero_maps_give_the_groups_back(groups in proptest::collection::vec(small_group(), 1..4)) {
        let maps = groups.windows(2).map(|w| AbHom::zero(w[0].clone(), w[1].clone())).collect();
        let c = AbComplex::new(groups.clone(), maps).unwrap();
        for (n, g) in groups.iter().enumerate() {
            prop_assert_eq!(c.homology_at(n).unwrap(), g.invariant_factors());
        }
    }

    #[test]
    fn homology_matches_enumeration(a in small_group(), b in small_group(), c in small_group(), seed in any::<u64>()) {
        let mut r = rng(seed);
        // one side zero keeps the composite zero
        let (f, g) = if r.gen_bool(0.5) {
            (random_hom(&mut r, &a, &b), AbHom::zero(b.clone(), c.clone()))
        } else {
            (AbHom::zero(a.clone(), b.clone()), random_hom(&mut r, &b, &c))
        };
        let complex = AbComplex::new(vec![a, b, c], vec![f.clone(), g.clone()]).unwrap();
        prop_assert_eq!(profile(&complex.homology_at(1).unwrap()), brute_homology(&f, &g));
    }

    #[test]
    fn canonical_form_is_idempotent(torsion in proptest::collection::vec(1u64..40, 0..5), free in 0usize..3) {
        let f = InvariantFactors::from_torsion(&torsion, free);
        prop_assert_eq!(f.canonical(), f.clone());
        prop_assert_eq!(f.canonical().canonical(), f.canonical());
    }

    #[test]
    fn cover_groupoids_are_groupoids(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_groupoid(&mut r, 8);
        let u = ObjectCover::new(random_covering_sets(&mut r, g.n_objects(), 3));
        let cg = cover_groupoid(&g, &u).unwrap();
        prop_assert!(cg.groupoid.validate().passed());
        prop_assert!(cg.canon.check(&cg.groupoid, &g).is_ok());
    }

    #[test]
    fn modules_are_invertible_and_pull_back_functorially(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_groupoid(&mut r, 6);
        let a = random_module(&mut r, &g, true);
        prop_assert!(validate_module(&a).passed());
        prop_assert!(validate_module(&constant_module(&g, a.fiber(0))).passed());
        for h in g.arrows() {
            let there_and_back = a.action(g.inverse(h)).compose(a.action(h)).unwrap();
            prop_assert!(there_and_back.same_map(&AbHom::identity(a.fiber(g.source(h)).clone())));
        }
        let u1 = ObjectCover::new(random_covering_sets(&mut r, g.n_objects(), 2));
        let c1 = cover_groupoid(&g, &u1).unwrap();
        let u2 = ObjectCover::new(random_covering_sets(&mut r, c1.groupoid.n_objects(), 2));
        let c2 = cover_groupoid(&c1.groupoid, &u2).unwrap();
        let stepwise = pullback_module(&c2.canon, &c2.groupoid, &pullback_module(&c1.canon, &c1.groupoid, &a).unwrap()).unwrap();
        let direct = pullback_module(&c1.canon.after(&c2.canon), &c2.groupoid, &a).unwrap();
        prop_assert_eq!(stepwise.fibers(), direct.fibers());
        for h in c2.groupoid.arrows() {
            prop_assert!(stepwise.action(h).same_map(direct.action(h)));
        }
    }

    #[test]
    fn isomorphisms_preserve_cohomology(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_groupoid(&mut r, 6);
        let a = random_module(&mut r, &g, true);
        let (h, f) = relabel(&g, &mut r);
        prop_assert!(f.check(&h, &g).is_ok());
        let b = pullback_module(&f, &h, &a).unwrap();
        for n in 0..=2 {
            prop_assert_eq!(cohomology(&a, n).unwrap(), cohomology(&b, n).unwrap());
        }
    }

    #[test]
    fn differential_squares_to_zero_up_to_level_four(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_groupoid(&mut r, 4);
        let a = random_module(&mut r, &g, true);
        prop_assert!(GroupoidComplex::new(&a, 3).unwrap().complex().check_composable().is_ok());
    }

    #[test]
    fn degree_two_dictionary_on_random_modules(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_groupoid(&mut r, 4);
        let a = random_module(&mut r, &g, false);
        let ext = ext_classes(&a).unwrap();
        for c in &ext.classes {
            let e = extension_from_cocycle(&a, &c.cocycle).unwrap();
            prop_assert_eq!(ext.class_of(&e).unwrap(), c.coords.clone());
            for s in e.all_sections().into_iter().take(4) {
                let back = cocycle_from_extension(&e, &s).unwrap();
                prop_assert!(is_coboundary(&a, &back.sub(&a, &c.cocycle)).unwrap().is_some());
            }
            let zero = c.coords.iter().all(|x| *x == BigInt::from(0));
            prop_assert_eq!(is_strictly_trivial(&e).unwrap().is_some(), zero);
        }
    }

    #[test]
    fn degree_one_torsors_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_groupoid(&mut r, 5);
        let a = random_module(&mut r, &g, false);
        let complex = GroupoidComplex::new(&a, 1).unwrap();
        let pres = complex.presentation(1).unwrap();
        for gen in pres.generators() {
            let phi = complex.unflatten(1, gen);
            let t = torsor_from_cocycle(&a, &phi).unwrap();
            let sections: Vec<usize> = g.objects().map(|x| t.points_over(x).next().unwrap()).collect();
            let back = cocycle_from_torsor(&t, &sections).unwrap();
            prop_assert!(is_coboundary(&a, &back.sub(&a, &phi)).unwrap().is_some());
            let identity: Vec<usize> = (0..t.len()).collect();
            prop_assert!(is_torsor_isomorphism(&t, &t, &identity));
            prop_assert_eq!(equivariant_section(&t).is_some(), is_coboundary(&a, &phi).unwrap().is_some());
        }
    }
}
