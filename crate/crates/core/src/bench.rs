//! Median-of-runs timing for the three core operations, backing the
//! `bench` CLI subcommand and the performance acceptance checks. Inputs
//! are seeded, so repeated invocations time identical work.

use std::hint::black_box;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clmul::{detected_square_path, SquarePath};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{ModSquarer, Trinomial};

/// Operand-size guard: one square at the cap needs ~0.75 GiB of buffers.
pub const MAX_BENCH_DEGREE: u64 = 1 << 31;

const INPUT_SEED: u64 = 0x5eed_0f_7121_0f02;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchOp {
    Square,
    ModSquare,
    Mul,
}

impl BenchOp {
    pub fn name(&self) -> &'static str {
        match self {
            BenchOp::Square => "square",
            BenchOp::ModSquare => "modsquare",
            BenchOp::Mul => "mul",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BenchReport {
    pub op: BenchOp,
    pub degree: u64,
    pub ns: u64,
}

impl BenchReport {
    /// The machine-parseable line the CLI prints.
    pub fn line(&self) -> String {
        format!("bench {} {} {}", self.op.name(), self.degree, self.ns)
    }
}

fn check_degree(degree: u64) -> Result<usize> {
    if degree == 0 {
        return Err(Error::Bench("degree 0 is a degenerate bench input".into()));
    }
    if degree > MAX_BENCH_DEGREE {
        return Err(Error::Bench(format!(
            "degree {degree} exceeds the memory guard {MAX_BENCH_DEGREE}"
        )));
    }
    Ok(degree as usize)
}

fn input(degree: usize) -> Poly {
    let mut rng = ChaCha8Rng::seed_from_u64(INPUT_SEED);
    Poly::random(&mut rng, degree)
}

fn median_ns<F: FnMut()>(runs: usize, mut f: F) -> u64 {
    f(); // warm caches and the capability probe
    let mut times: Vec<u64> = (0..runs)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_nanos() as u64
        })
        .collect();
    times.sort_unstable();
    times[times.len() / 2]
}

/// Median time to square a polynomial of exact `degree`, on the probed
/// default path.
pub fn bench_square(degree: u64) -> Result<BenchReport> {
    bench_square_with(degree, detected_square_path())
}

/// As [`bench_square`] with an explicit spread path, for A/B comparisons.
/// Requesting the hardware path on a machine without it is an error.
pub fn bench_square_with(degree: u64, path: SquarePath) -> Result<BenchReport> {
    let degree_us = check_degree(degree)?;
    if path == SquarePath::Pdep && detected_square_path() != SquarePath::Pdep {
        return Err(Error::Bench("pdep path unavailable on this machine".into()));
    }
    let a = input(degree_us);
    let ns = median_ns(15, || {
        black_box(black_box(&a).square_with(path));
    });
    Ok(BenchReport {
        op: BenchOp::Square,
        degree,
        ns,
    })
}

/// Median time for one modular squaring step at operand `degree`, i.e.
/// squaring modulo x^(degree+1) + x^s + 1 with s = (degree+1)/2. Uses the
/// reusable workspace, as the search hot loop does.
pub fn bench_modsquare(degree: u64) -> Result<BenchReport> {
    let degree_us = check_degree(degree)?;
    let r = degree + 1;
    let t = Trinomial::new(r, (r / 2).max(1))?;
    let mut sq = ModSquarer::new(&t);
    let mut buf = sq.buffer_from(&input(degree_us))?;
    let ns = median_ns(15, || {
        sq.step(black_box(&mut buf));
    });
    Ok(BenchReport {
        op: BenchOp::ModSquare,
        degree,
        ns,
    })
}

/// Median time to multiply two polynomials of exact `degree`.
pub fn bench_mul(degree: u64) -> Result<BenchReport> {
    let degree_us = check_degree(degree)?;
    let a = input(degree_us);
    let b = {
        let mut rng = ChaCha8Rng::seed_from_u64(INPUT_SEED ^ 1);
        Poly::random(&mut rng, degree_us)
    };
    let ns = median_ns(5, || {
        black_box(black_box(&a).mul(black_box(&b)));
    });
    Ok(BenchReport {
        op: BenchOp::Mul,
        degree,
        ns,
    })
}

pub fn run(op: BenchOp, degree: u64) -> Result<BenchReport> {
    match op {
        BenchOp::Square => bench_square(degree),
        BenchOp::ModSquare => bench_modsquare(degree),
        BenchOp::Mul => bench_mul(degree),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guards() {
        assert!(matches!(bench_square(0), Err(Error::Bench(_))));
        assert!(matches!(
            bench_square(MAX_BENCH_DEGREE + 1),
            Err(Error::Bench(_))
        ));
    }

    #[test]
    fn small_benches_report() {
        let rep = run(BenchOp::Square, 10_000).unwrap();
        assert!(rep.ns > 0);
        assert_eq!(rep.line(), format!("bench square 10000 {}", rep.ns));
        let rep = run(BenchOp::ModSquare, 10_000).unwrap();
        assert!(rep.ns > 0);
        let rep = run(BenchOp::Mul, 4_000).unwrap();
        assert!(rep.ns > 0);
    }
}
