use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use trinoforge::{ModSquarer, MulAlgo, Poly, SquarePath, Trinomial};

fn rand_poly(degree: usize, seed: u64) -> Poly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Poly::random(&mut rng, degree)
}

fn bench_square(c: &mut Criterion) {
    let mut group = c.benchmark_group("square");
    for degree in [100_000usize, 1_000_000, 10_000_000] {
        let a = rand_poly(degree, 7);
        group.throughput(Throughput::Bytes((degree as u64 + 7) / 8));
        group.bench_with_input(BenchmarkId::new("table", degree), &a, |b, a| {
            b.iter(|| black_box(a.square_with(SquarePath::Table)))
        });
        if trinoforge::square_pdep_available() {
            group.bench_with_input(BenchmarkId::new("pdep", degree), &a, |b, a| {
                b.iter(|| black_box(a.square_with(SquarePath::Pdep)))
            });
        }
    }
    group.finish();
}

fn bench_full_scale_square(c: &mut Criterion) {
    // The headline operation: squaring at the record search degree.
    let mut group = c.benchmark_group("square_74m");
    group.sample_size(10).measurement_time(Duration::from_secs(2));
    let a = rand_poly(74_207_280, 7);
    group.bench_function("auto", |b| b.iter(|| black_box(a.square())));
    group.finish();
}

fn bench_modsquare(c: &mut Criterion) {
    let mut group = c.benchmark_group("modsquare");
    for (r, s) in [(521u64, 158u64), (1_000_003, 500_000), (74_207_281, 9_156_813)] {
        if r > 1_000_000 {
            group.sample_size(10).measurement_time(Duration::from_secs(2));
        }
        let t = Trinomial::new(r, s).unwrap();
        let mut sq = ModSquarer::new(&t);
        let mut buf = sq
            .buffer_from(&rand_poly(r as usize - 1, 11))
            .unwrap();
        group.bench_function(BenchmarkId::from_parameter(r), |b| {
            b.iter(|| sq.step(black_box(&mut buf)))
        });
    }
    group.finish();
}

fn bench_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("mul");
    // Word counts straddling the Karatsuba threshold (40 words = 2560 bits).
    for degree in [1_280usize, 2_400, 2_700, 10_000, 100_000] {
        let a = rand_poly(degree, 3);
        let b = rand_poly(degree, 4);
        group.bench_with_input(
            BenchmarkId::new("auto", degree),
            &(&a, &b),
            |bench, (a, b)| bench.iter(|| black_box(a.mul(b))),
        );
        if degree <= 10_000 {
            group.bench_with_input(
                BenchmarkId::new("schoolbook", degree),
                &(&a, &b),
                |bench, (a, b)| bench.iter(|| black_box(a.mul_with(b, MulAlgo::Schoolbook))),
            );
        }
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_square,
    bench_full_scale_square,
    bench_modsquare,
    bench_mul
);
criterion_main!(benches);
