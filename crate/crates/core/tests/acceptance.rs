//! One line per acceptance criterion, written straight to stderr so it shows
//! up under the default capturing test runner.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::{cyclic_integral, profile_of, BruteForce};
use groupoid_cohomology::abelian::AbHom;
use groupoid_cohomology::cech::{
    constant_space_comparison, product_cover, random_homotopy_setup, CechComplex, Cover, FineCover,
    FiniteSimplicialSpace, PointSet,
};
use groupoid_cohomology::classify::{
    are_equivalent, baer_sum, check_covered_cocycle, cocycle_from_extension, coherent_covered_data, ext_classes,
    extension_from_cocycle, is_strictly_trivial, validate_extension, verify_psi_coherence, ArrowCover,
};
use groupoid_cohomology::cohomology::{invariant_sections, is_coboundary, Cochain};
use groupoid_cohomology::groupoid::{
    check_simplicial_identities, cyclic_group, disjoint_union, pair_groupoid, product, unit_groupoid, ObjectCover,
};
use groupoid_cohomology::morita::morita_compare;
use groupoid_cohomology::par::Strategy;
use groupoid_cohomology::random::{random_covering_sets, random_element, random_groupoid, random_module};
use groupoid_cohomology::{
    cohomology, constant_module, Budget, FinAbGroup, FiniteGroupoid, GModule, GroupoidComplex, InvariantFactors,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn negation(g: &FiniteGroupoid, q: u64) -> GModule {
    let b = FinAbGroup::cyclic(q);
    let actions = g
        .arrows()
        .map(|h| if g.is_unit(h) { AbHom::identity(b.clone()) } else { AbHom::scalar(b.clone(), -1) })
        .collect();
    GModule::new(g.clone(), vec![b], actions).unwrap()
}

fn goldens() -> Check {
    let start = Instant::now();
    let mut worst = Duration::ZERO;
    let mut time = |f: &mut dyn FnMut() -> Result<(), String>| -> Result<(), String> {
        let t = Instant::now();
        f()?;
        worst = worst.max(t.elapsed());
        Ok(())
    };
    let c2 = constant_module(&cyclic_group(2), &FinAbGroup::cyclic(2));
    for n in 0..=2 {
        time(&mut || {
            let h = cohomology(&c2, n).map_err(err)?;
            let z2 = InvariantFactors::from_torsion(&[2], 0);
            ensure(h == z2, || format!("H^{n}(C2, Z/2) = {h}"))?;
            let brute = BruteForce::new(&c2, n).torsion_profile(8);
            ensure(brute == profile_of(&z2, 8), || format!("brute force disagrees at H^{n}"))
        })?;
    }
    time(&mut || {
        let c3 = constant_module(&cyclic_group(3), &FinAbGroup::integers());
        let h = cohomology(&c3, 2).map_err(err)?;
        let (torsion, free) = cyclic_integral(3, 2);
        ensure(torsion == [3] && free == 0, || "periodic resolution gives something else".into())?;
        ensure(h == InvariantFactors::from_torsion(&torsion, free), || format!("H^2(C3, Z) = {h}"))
    })?;
    ensure(worst < Duration::from_secs(1), || format!("slowest golden took {worst:?}"))?;
    Ok(format!("4 goldens, slowest {worst:.2?}, total {:.2?}", start.elapsed()))
}

fn degree_zero() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let cases = 60;
    for i in 0..cases {
        let g = random_groupoid(&mut rng, 12);
        let a = random_module(&mut rng, &g, i % 3 == 0);
        let h = cohomology(&a, 0).map_err(err)?;
        let inv = invariant_sections(&a).map_err(err)?;
        ensure(h == inv.factors, || format!("case {i}: H^0 = {h}, invariant sections {}", inv.factors))?;
    }
    Ok(format!("{cases} random fixtures with at most 12 arrows"))
}

fn cochain_values(level: &common::Level, c: &Cochain) -> Vec<i64> {
    level
        .tuples
        .iter()
        .flat_map(|t| c.at(t).to_vec())
        .collect()
}

fn dictionary_on(a: &GModule, name: &str) -> Result<(usize, usize), String> {
    let ext = ext_classes(a).map_err(err)?;
    let complex = GroupoidComplex::new(a, 2).map_err(err)?;
    let brute = BruteForce::new(a, 2);
    ensure(ext.classes.len() as u64 == brute.order(), || {
        format!("{name}: {} classes, brute force H^2 has order {}", ext.classes.len(), brute.order())
    })?;
    // every cocycle: extension, back to a cocycle, same class; split iff coboundary
    for z in &brute.cocycles {
        let phi = brute.level.to_cochain(a, z);
        let e = extension_from_cocycle(a, &phi).map_err(err)?;
        validate_extension(&e).map_err(err)?;
        let class = complex.class_of(&phi).map_err(err)?.ok_or("cocycle test failed")?;
        ensure(ext.class_of(&e).map_err(err)? == class, || format!("{name}: class changed for {z:?}"))?;
        let psi = cocycle_from_extension(&e, &e.canonical_section()).map_err(err)?;
        let diff: Vec<i64> = cochain_values(&brute.level, &psi.sub(a, &phi));
        ensure(brute.is_coboundary(&diff), || format!("{name}: round trip of {z:?} left its class"))?;
        let split = is_strictly_trivial(&e).map_err(err)?.is_some();
        let boundary = is_coboundary(a, &phi).map_err(err)?.is_some();
        ensure(split == boundary && split == brute.is_coboundary(z), || {
            format!("{name}: {z:?} split {split}, coboundary {boundary}")
        })?;
    }
    // extensions up to equivalence match classes
    for (i, x) in ext.classes.iter().enumerate() {
        for (j, y) in ext.classes.iter().enumerate() {
            let eq = are_equivalent(&x.extension, &y.extension).map_err(err)?.is_some();
            ensure(eq == (i == j), || format!("{name}: classes {i} and {j} equivalent: {eq}"))?;
            let sum = baer_sum(&x.extension, &y.extension).map_err(err)?;
            let got = ext.class_of(&sum).map_err(err)?;
            ensure(got == ext.add(&x.coords, &y.coords), || format!("{name}: Baer sum {i} + {j}"))?;
        }
        let back = extension_from_cocycle(a, &cocycle_from_extension(&x.extension, &x.extension.canonical_section()).map_err(err)?)
            .map_err(err)?;
        ensure(are_equivalent(&back, &x.extension).map_err(err)?.is_some(), || {
            format!("{name}: class {i} does not survive extension -> cocycle -> extension")
        })?;
    }
    Ok((brute.cocycles.len(), ext.classes.len()))
}

fn dictionary() -> Check {
    let cases = [
        ("(C2, Z/2)", constant_module(&cyclic_group(2), &FinAbGroup::cyclic(2))),
        ("(C2, Z/3 negation)", negation(&cyclic_group(2), 3)),
        ("(C3, Z/3)", constant_module(&cyclic_group(3), &FinAbGroup::cyclic(3))),
    ];
    let mut parts = Vec::new();
    for (name, a) in &cases {
        let (cocycles, classes) = dictionary_on(a, name)?;
        parts.push(format!("{name}: {cocycles} cocycles, {classes} classes"));
    }
    Ok(parts.join("; "))
}

fn homotopy() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let budget = Budget::default();
    let (mut instances, mut checked) = (0, 0);
    for i in 0..220 {
        let degree = 1 + (i / 2) % 2;
        let space = if i % 2 == 0 {
            let g = random_groupoid(&mut rng, 6);
            let infinite = rng.gen_bool(0.3);
            let a = random_module(&mut rng, &g, infinite);
            FiniteSimplicialSpace::nerve(&a, degree + 1)
        } else {
            let points = rng.gen_range(1..=3);
            let coefficients = [FinAbGroup::integers(), FinAbGroup::cyclic(2), FinAbGroup::cyclic(6)][rng.gen_range(0..3)].clone();
            FiniteSimplicialSpace::constant(points, coefficients, degree + 1)
        };
        let kind = if i % 4 < 2 { FineCover::Product } else { FineCover::Maximal };
        let setup = random_homotopy_setup(&mut rng, space, kind, degree, 3, &budget).map_err(err)?;
        for n in 1..=degree {
            let phi = setup.random_cochain(&mut rng, n);
            let c = setup.check(&phi).map_err(err)?;
            checked += c.checked;
            ensure(c.holds(), || format!("instance {i}, degree {n}: {} mismatches", c.mismatches.len()))?;
        }
        instances += 1;
    }
    Ok(format!("{instances} instances, {checked} pointwise comparisons"))
}

fn cech_consistency() -> Check {
    let a = constant_module(&cyclic_group(2), &FinAbGroup::cyclic(2));
    let space = FiniteSimplicialSpace::nerve(&a, 3);
    let budget = Budget::default();
    for (name, cover) in [("maximal", Cover::maximal(&space, 3)), ("single", Cover::single(&space, 3))] {
        let c = CechComplex::new(&space, &cover, 2, &budget, Strategy::default()).map_err(err)?;
        for n in 0..=2 {
            let got = c.cohomology(n).map_err(err)?;
            let expected = cohomology(&a, n).map_err(err)?;
            ensure(got == expected, || format!("{name} cover, H^{n}: {got} against {expected}"))?;
        }
    }
    Ok("maximal and single covers of nerve(C2) with Z/2, n <= 2".into())
}

fn constant_comparison() -> Check {
    let mut parts = Vec::new();
    for points in [2, 3] {
        let partition: Vec<PointSet> = (0..points).map(|x| PointSet::from_points(points, [x])).collect();
        let r = constant_space_comparison(points, &partition, FinAbGroup::integers(), 2, &Budget::default())
            .map_err(err)?;
        ensure(r.holds(), || format!("{points} points: {r:?}"))?;
        ensure(r.sigma_cohomology[0] == InvariantFactors::from_torsion(&[], points), || {
            format!("{points} points: H^0 = {}", r.sigma_cohomology[0])
        })?;
        ensure(r.sigma_cohomology[1..].iter().all(InvariantFactors::is_trivial), || {
            format!("{points} points: higher cohomology is not zero")
        })?;
        parts.push(format!(
            "{points} points: {} q∘ι and {} homotopy checks",
            r.q_iota_checked, r.homotopy_checked
        ));
    }
    Ok(parts.join("; "))
}

fn morita() -> Check {
    let degrees = [0, 1, 2];
    let budget = Budget::default();
    let compare = |a: &GModule, u: &ObjectCover| morita_compare(a, u, &degrees, &budget, Strategy::default());
    let c2 = constant_module(&cyclic_group(2), &FinAbGroup::cyclic(2));
    let r = compare(&c2, &ObjectCover::new(vec![vec![0], vec![0]])).map_err(err)?;
    ensure(r.holds() && r.ext.is_some(), || format!("doubled point on C2: {r:?}"))?;
    let p = constant_module(&pair_groupoid(2), &FinAbGroup::cyclic(3));
    let r = compare(&p, &ObjectCover::partition(p.base())).map_err(err)?;
    ensure(r.holds() && r.ext.is_some(), || format!("pair groupoid partition: {r:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let (cases, mut finite) = (24, 0);
    for i in 0..cases {
        let g = random_groupoid(&mut rng, 4);
        let a = random_module(&mut rng, &g, i % 4 == 0);
        let u = ObjectCover::new(random_covering_sets(&mut rng, g.n_objects(), 2));
        let r = compare(&a, &u).map_err(err)?;
        ensure(r.holds(), || format!("random case {i}: {r:?}"))?;
        finite += r.ext.is_some() as usize;
    }
    Ok(format!("2 fixtures and {cases} random covers, ext counts compared on {} finite cases", finite + 2))
}

fn structural() -> Check {
    let samples = [
        cyclic_group(3),
        pair_groupoid(3),
        product(&cyclic_group(2), &pair_groupoid(2)),
        disjoint_union(&cyclic_group(2), &unit_groupoid(2)),
    ];
    let mut identities = 0;
    for g in &samples {
        let r = check_simplicial_identities(g, 4);
        ensure(r.failures.is_empty(), || format!("simplicial identity: {}", r.failures[0]))?;
        identities += r.checked;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    let mut complexes = 0;
    for i in 0..16 {
        // maximal σ-covers grow fast; only C2 goes up to degree 2
        let (g, top) = match i {
            0 => (cyclic_group(2), 2),
            i if i <= samples.len() => (samples[i - 1].clone(), 1),
            _ => (random_groupoid(&mut rng, 6), 1),
        };
        let a = random_module(&mut rng, &g, i % 2 == 0);
        GroupoidComplex::new(&a, 2).map_err(err)?.complex().check_composable().map_err(err)?;
        let space = FiniteSimplicialSpace::nerve(&a, top + 1);
        let objects = g.n_objects();
        let base: Vec<PointSet> = random_covering_sets(&mut rng, objects, 2)
            .into_iter()
            .map(|s| PointSet::from_points(objects, s))
            .collect();
        let covers = [
            Cover::maximal(&space, top + 1),
            Cover::single(&space, top + 1),
            product_cover(&space, &base, top + 1).map_err(err)?,
        ];
        for cover in &covers {
            let c = CechComplex::new(&space, cover, top, &Budget::default(), Strategy::default()).map_err(err)?;
            c.complex().check_composable().map_err(err)?;
        }
        complexes += 1 + covers.len();
    }
    let mut psi = 0;
    for i in 0..24 {
        let g = random_groupoid(&mut rng, 5);
        let a = random_module(&mut rng, &g, false);
        let ext = ext_classes(&a).map_err(err)?;
        let phi = &ext.classes[rng.gen_range(0..ext.classes.len())].cocycle;
        let sets = random_covering_sets(&mut rng, g.n_arrows(), 3);
        let cover = ArrowCover::new(&g, sets).map_err(err)?;
        let mut beta = std::collections::BTreeMap::new();
        for k in 0..cover.len() {
            for h in g.arrows() {
                beta.insert((k, h), random_element(&mut rng, a.fiber(g.range(h))));
            }
        }
        let d = coherent_covered_data(&a, cover, phi, &|k, h| beta[&(k, h)].clone());
        ensure(check_covered_cocycle(&d).is_none(), || format!("case {i}: covered cocycle identity fails"))?;
        let r = verify_psi_coherence(&d);
        ensure(r.passed(), || format!("case {i}: {:?}", r.failures[0]))?;
        psi += r.checked;
    }
    Ok(format!(
        "{identities} simplicial identities, d∘d = 0 on {complexes} complexes, {psi} ψ comparisons"
    ))
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, fn() -> Check); 8] = [
        ("cyclic-group goldens", 4, goldens),
        ("H^0 equals invariant sections", 10, degree_zero),
        ("degree-2 dictionary", 30, dictionary),
        ("homotopy identity", 60, homotopy),
        ("Čech consistency", 10, cech_consistency),
        ("constant-space comparison", 10, constant_comparison),
        ("Morita invariance", 120, morita),
        ("structural suites", 30, structural),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stderr();
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let verdict = match &result {
            Ok(_) if elapsed > Duration::from_secs(*limit) => Err(format!("took {elapsed:.2?}")),
            r => r.clone(),
        };
        let line = match &verdict {
            Ok(detail) => format!("criterion {}: PASS {name} [{elapsed:.2?} < {limit}s] {detail}", i + 1),
            Err(why) => format!("criterion {}: FAIL {name} [{elapsed:.2?}, limit {limit}s] {why}", i + 1),
        };
        writeln!(out, "{line}").unwrap();
        if verdict.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
