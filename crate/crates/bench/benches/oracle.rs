use abdyn_bench::scenario;
use abdyn_core::oracle::{commutant_basis, dense_sampling_check, reduce_mod, verify_fibration, ModLattice};
use abdyn_core::analyze;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bench_verify_fibration(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_fibration");
    group.sample_size(10);
    for (name, modulus) in [("jordan_e2", 7u64), ("jordan3_e3", 5), ("rm_jordan_s2", 5)] {
        let s = scenario(name);
        let verdict = analyze(&s.av, &s.decls, &s.gens).unwrap();
        let cert = verdict.certificate().unwrap().clone();
        let model = reduce_mod(&s.av, &s.decls, &s.gens, modulus, 0).unwrap();
        group.bench_function(BenchmarkId::new(name, modulus), |b| {
            b.iter(|| verify_fibration(&s.av, &model, &cert, 10_000_000, 0))
        });
    }
    group.finish();
}

fn bench_dense_check(c: &mut Criterion) {
    let s = scenario("double_triple_e");
    let commutant = commutant_basis(&s.av);
    let mut model = reduce_mod(&s.av, &s.decls, &s.gens, 11, 0).unwrap();
    c.bench_function("dense_sampling_check/double_triple_e/100", |b| {
        b.iter(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            dense_sampling_check(&mut model, &commutant, 1, &BigInt::from(1), 100, &mut rng)
        })
    });
}

fn bench_lattice(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let modulus = 1_000_003u64;
    let gens: Vec<Vec<u64>> = (0..24).map(|_| (0..12).map(|_| rng.random_range(0..modulus)).collect()).collect();
    c.bench_function("mod_lattice/12x24", |b| b.iter(|| ModLattice::generated_by(12, modulus, &gens)));
}

criterion_group!(benches, bench_verify_fibration, bench_dense_check, bench_lattice);
criterion_main!(benches);
