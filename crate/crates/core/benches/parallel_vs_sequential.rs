use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use groupoid_cohomology::cech::{CechComplex, Cover, FiniteSimplicialSpace};
use groupoid_cohomology::groupoid::{cyclic_group, pair_groupoid, product};
use groupoid_cohomology::par::Strategy;
use groupoid_cohomology::{constant_module, Budget, FinAbGroup, GroupoidComplex};

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn groupoid_complex(c: &mut Criterion) {
    let g = product(&cyclic_group(3), &pair_groupoid(2));
    let a = constant_module(&g, &FinAbGroup::cyclic(3));
    let mut group = c.benchmark_group("groupoid_complex");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, 3), &strategy, |b, &s| {
            b.iter(|| GroupoidComplex::with_options(&a, 3, &Budget::unlimited(), s).unwrap())
        });
    }
    group.finish();
}

fn cech_complex(c: &mut Criterion) {
    let a = constant_module(&pair_groupoid(2), &FinAbGroup::cyclic(2));
    let space = FiniteSimplicialSpace::nerve(&a, 4);
    let cover = Cover::maximal(&space, 4);
    let mut group = c.benchmark_group("cech_complex");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, 3), &strategy, |b, &s| {
            b.iter(|| CechComplex::new(&space, &cover, 3, &Budget::unlimited(), s).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, groupoid_complex, cech_complex);
criterion_main!(benches);
