use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use trinoforge::bench::{self, BenchOp};
use trinoforge::cert;
use trinoforge::engine::is_mersenne_exponent;
use trinoforge::search::{run_search, SearchConfig};
use trinoforge::swan;
use trinoforge::{oracle, Classifier, ClassifyConfig, Error, Trinomial, Verdict};

/// Search for, test, and certify primitive trinomials x^r + x^s + 1
/// over GF(2).
#[derive(Parser)]
#[command(name = "trinoforge", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep an s-range for one degree r, with checkpoint/resume.
    Search {
        #[arg(long)]
        r: u64,
        /// First s to consider (default 1).
        #[arg(long)]
        s_from: Option<u64>,
        /// Last s to consider (default floor(r/2)).
        #[arg(long)]
        s_to: Option<u64>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Sieve depth at which gcd checks switch from every step to
        /// batched (default max(64, 8*ceil(log2 r))).
        #[arg(long)]
        dmax: Option<u64>,
        /// Batched gcd interval.
        #[arg(long, default_value_t = 64)]
        batch: usize,
        /// Checkpoint file (appended; enables resume).
        #[arg(long)]
        ckpt: Option<PathBuf>,
        /// Certificate output file (one line per reducible candidate).
        #[arg(long)]
        certs: Option<PathBuf>,
        /// Extra seed for the factor-splitting RNG.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Classify a single trinomial.
    Test {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: u64,
        /// Cross-check the verdict against the brute-force oracle
        /// (small degrees only).
        #[arg(long)]
        oracle: bool,
    },
    /// Swan parity report: one candidate with --s, survivors otherwise.
    Swan {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: Option<u64>,
    },
    /// Verify certificate files; nonzero exit on any rejection.
    VerifyCert {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Time one operation and print `bench <op> <degree> <ns>`.
    Bench {
        #[arg(long)]
        op: BenchOpArg,
        #[arg(long)]
        degree: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchOpArg {
    Square,
    Modsquare,
    Mul,
}

impl From<BenchOpArg> for BenchOp {
    fn from(op: BenchOpArg) -> BenchOp {
        match op {
            BenchOpArg::Square => BenchOp::Square,
            BenchOpArg::Modsquare => BenchOp::ModSquare,
            BenchOpArg::Mul => BenchOp::Mul,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}

/// 0 success, 1 verification/computation failure, 2 usage, 3 I/O.
fn exit_code_for(e: &anyhow::Error) -> ExitCode {
    let Some(core) = e.downcast_ref::<Error>() else {
        return ExitCode::from(1);
    };
    match core {
        Error::Io(_) | Error::Checkpoint(_) => ExitCode::from(3),
        Error::Config(_)
        | Error::InvalidTrinomial { .. }
        | Error::OutOfSearchRange { .. }
        | Error::NotOddPrime(_)
        | Error::ParityUndefined
        | Error::CheckpointMismatch { .. }
        | Error::OracleRange { .. }
        | Error::Bench(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn run(cmd: Cmd) -> anyhow::Result<ExitCode> {
    match cmd {
        Cmd::Search {
            r,
            s_from,
            s_to,
            threads,
            dmax,
            batch,
            ckpt,
            certs,
            seed,
        } => {
            let cfg = SearchConfig {
                r,
                s_from,
                s_to,
                threads,
                dmax,
                batch,
                ckpt_path: ckpt,
                certs_path: certs,
                seed,
            };
            let outcome = run_search(&cfg)?;
            if !is_mersenne_exponent(r) {
                eprintln!(
                    "note: r={r} is not a known Mersenne exponent; P entries are \
                     irreducible but primitivity is uncertified"
                );
            }
            for s in &outcome.primitives {
                println!("primitive {r} {s}");
            }
            let c = outcome.counts;
            println!(
                "search r={r} s=[{}..{}] newly-decided={} P={} R={} W={} decided={}/{}",
                s_from.unwrap_or(1),
                s_to.unwrap_or(r / 2),
                outcome.newly_decided,
                c.primitive,
                c.reducible,
                c.ruled_out,
                outcome.checkpoint.decided(),
                trinoforge::search::search_space(r),
            );
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Test { r, s, oracle } => cmd_test(r, s, oracle),

        Cmd::Swan { r, s: Some(s) } => {
            let t = Trinomial::new(r, s)?;
            let (parity, ruled_out) = match swan::factor_parity(&t) {
                Ok(trinoforge::Parity::Even) => ("even", true),
                Ok(trinoforge::Parity::Odd) => ("odd", false),
                Err(Error::ParityUndefined) => ("square", true),
                Err(e) => return Err(e.into()),
            };
            println!("swan r={r} s={s} parity={parity} ruled-out={ruled_out}");
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Swan { r, s: None } => {
            if r % 2 == 0 {
                bail!(Error::NotOddPrime(r));
            }
            let mut count = 0u64;
            for s in swan::surviving_s(r) {
                println!("{s}");
                count += 1;
            }
            println!("swan r={r} survivors={count} of={}", r / 2);
            Ok(ExitCode::SUCCESS)
        }

        Cmd::VerifyCert { paths } => {
            let mut any_rejected = false;
            for path in &paths {
                let summary = cert::verify_file(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                println!(
                    "verify-cert {}: accepted={} rejected={}",
                    path.display(),
                    summary.accepted,
                    summary.rejected
                );
                if let Some(first) = &summary.first_rejection {
                    println!(
                        "  first rejection: line {} ({}): {}",
                        first.line_number, first.reason, first.line
                    );
                    any_rejected = true;
                }
            }
            Ok(if any_rejected {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }

        Cmd::Bench { op, degree } => {
            let report = bench::run(op.into(), degree)?;
            println!("{}", report.line());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_test(r: u64, s: u64, with_oracle: bool) -> anyhow::Result<ExitCode> {
    let t = Trinomial::new(r, s)?;
    let s = if t.in_search_range() {
        s
    } else {
        eprintln!(
            "note: s={s} is in the reciprocal half; testing the equivalent s={}",
            r - s
        );
        r - s
    };
    let classifier = Classifier::new(r, ClassifyConfig::default())?;
    let verdict = classifier.classify(s)?;
    match &verdict {
        Verdict::Primitive => println!("test r={r} s={s} verdict=primitive"),
        Verdict::IrreducibleUncertified => {
            println!("test r={r} s={s} verdict=irreducible-uncertified")
        }
        Verdict::RuledOutBySwan => println!("test r={r} s={s} verdict=ruled-out-by-swan"),
        Verdict::Reducible { d, factor } => println!(
            "test r={r} s={s} verdict=reducible d={d} factor={}",
            factor.to_hex()
        ),
    }
    if with_oracle {
        let dense = Trinomial::new(r, s)?.dense();
        let facs = oracle::factorize_small(&dense)
            .map_err(|e| anyhow!(e).context("oracle cross-check needs degree <= 48"))?;
        let listing: Vec<String> = facs
            .factors()
            .iter()
            .map(|(f, m)| {
                if *m == 1 {
                    f.to_hex()
                } else {
                    format!("{}^{m}", f.to_hex())
                }
            })
            .collect();
        println!("oracle factors: {}", listing.join(" "));
        let engine_irreducible =
            matches!(verdict, Verdict::Primitive | Verdict::IrreducibleUncertified);
        if engine_irreducible != facs.is_irreducible() {
            bail!("oracle disagrees with the engine verdict for r={r} s={s}");
        }
        if let Verdict::Reducible { d, .. } = &verdict {
            if facs.smallest_degree() != Some(*d as usize) {
                bail!(
                    "oracle smallest factor degree {:?} != engine d={d}",
                    facs.smallest_degree()
                );
            }
        }
        println!("oracle agreement: ok");
    }
    Ok(ExitCode::SUCCESS)
}
