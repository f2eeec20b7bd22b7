use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kmforge::ffield::{Field, FieldSpec};
use kmforge::pgroup::DEFAULT_CAP;
use kmforge::rank2::{congruence_identity_check, quotient, CaseTag, IdentityId, RealizationCase};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let default = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("sequential", single), ("parallel", default)]
}

fn closure(c: &mut Criterion) {
    let case = RealizationCase::new(CaseTag::Twisted, &FieldSpec::from_order(5).unwrap(), 2).unwrap();
    let mut group = c.benchmark_group("closure_twisted_q5_n2");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| quotient(&case, DEFAULT_CAP).unwrap().order()))
        });
    }
    group.finish();
}

fn identity_sweep(c: &mut Criterion) {
    let field = Arc::new(Field::of_order(9).unwrap());
    let mut group = c.benchmark_group("identity_sweep_q9");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                pool.install(|| {
                    IdentityId::ALL
                        .into_iter()
                        .all(|id| congruence_identity_check(id, field.clone(), 6).unwrap().passed())
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, closure, identity_sweep);
criterion_main!(benches);
