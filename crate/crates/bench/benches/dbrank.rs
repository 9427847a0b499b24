use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;

use dbrank::encoder::{encode_a, encode_b, InfoVecA, InfoVecB, Repository};
use dbrank::synthesis::{eulerian_compact, eulerian_string};
use dbrank::{decide, RankPermutation};

fn bench_decide(c: &mut Criterion) {
    let repo = Repository::embedded();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for (q, ell) in [(3, 2), (3, 3), (4, 2)] {
        let v = InfoVecB::random(q, ell, &mut rng);
        let pi = encode_b(&v, repo).unwrap().permutation().unwrap();
        c.bench_function(&format!("decide feasible q={q} ell={ell}"), |b| b.iter(|| decide(black_box(&pi))));
    }
    let id = RankPermutation::identity(dbrank::Params::new(3, 3).unwrap());
    c.bench_function("decide identity q=3 ell=3", |b| b.iter(|| decide(black_box(&id))));
}

fn bench_encode(c: &mut Criterion) {
    let repo = Repository::embedded();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
    let a = InfoVecA::random(6, &mut rng);
    c.bench_function("encode a q=6", |b| b.iter(|| encode_a(black_box(&a), repo).unwrap()));
    let v = InfoVecB::random(3, 4, &mut rng);
    c.bench_function("encode b q=3 ell=4", |b| b.iter(|| encode_b(black_box(&v), repo).unwrap()));
}

fn bench_eulerian(c: &mut Criterion) {
    let repo = Repository::embedded();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let small = encode_a(&InfoVecA::random(3, &mut rng), repo).unwrap();
    c.bench_function("eulerian string q=3 ell=2", |b| b.iter(|| eulerian_string(black_box(&small)).unwrap()));
    let big = encode_b(&InfoVecB::random(3, 3, &mut rng), repo).unwrap().into_profile();
    c.bench_function("eulerian compact q=3 ell=3", |b| b.iter(|| eulerian_compact(black_box(&big)).unwrap()));
}

criterion_group!(benches, bench_decide, bench_encode, bench_eulerian);
criterion_main!(benches);
