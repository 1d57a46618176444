use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use permsep_core::assignment::{exhaustive_best_permutation, hungarian, sinkhorn};
use permsep_core::losses::mcl_from_cost;
use permsep_core::rng::SplitMix64;
use permsep_core::sdr::{cost_matrix, neg_si_sdr, CostMatrix};
use permsep_core::signal::{Signal, SourceSet};

fn random_cost(n: usize, seed: u64) -> CostMatrix {
    let mut rng = SplitMix64::stream(seed, n as u64);
    CostMatrix::from_rows((0..n).map(|_| (0..n).map(|_| rng.next_f64()).collect()).collect())
        .unwrap()
}

fn noise_set(n: usize, l: usize, seed: u64) -> SourceSet {
    let mut rng = SplitMix64::stream(seed, 0xB0);
    SourceSet::new(
        (0..n)
            .map(|_| Signal::new((0..l).map(|_| rng.next_normal()).collect()).unwrap())
            .collect(),
    )
    .unwrap()
}

fn bench_assignment_solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("assignment");
    for n in [4usize, 8, 16, 32, 64, 128] {
        let costs = random_cost(n, 7);
        group.bench_with_input(BenchmarkId::new("hungarian", n), &costs, |b, costs| {
            b.iter(|| hungarian(black_box(costs)))
        });
        group.bench_with_input(BenchmarkId::new("mcl_row_min", n), &costs, |b, costs| {
            b.iter(|| mcl_from_cost(black_box(costs)))
        });
        group.bench_with_input(
            BenchmarkId::new("sinkhorn_eps0.05", n),
            &costs,
            |b, costs| b.iter(|| sinkhorn(black_box(costs), 0.05, 500, 1e-6).unwrap()),
        );
        if n <= 8 {
            group.bench_with_input(BenchmarkId::new("exhaustive", n), &costs, |b, costs| {
                b.iter(|| exhaustive_best_permutation(black_box(costs)).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_pairwise_metric(c: &mut Criterion) {
    let mut group = c.benchmark_group("si_sdr");
    for l in [256usize, 1024, 4096] {
        let set = noise_set(2, l, 3);
        group.bench_with_input(BenchmarkId::new("neg_si_sdr", l), &set, |b, set| {
            b.iter(|| neg_si_sdr(black_box(&set[0]), black_box(&set[1])).unwrap())
        });
    }
    group.finish();
}

fn bench_cost_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("cost_matrix");
    for n in [4usize, 16, 64] {
        let targets = noise_set(n, 512, 1);
        let predictions = noise_set(n, 512, 2);
        group.bench_with_input(
            BenchmarkId::from_parameter(n),
            &(targets, predictions),
            |b, (t, p)| b.iter(|| cost_matrix(black_box(t), black_box(p)).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_assignment_solvers,
    bench_pairwise_metric,
    bench_cost_matrix
);
criterion_main!(benches);
