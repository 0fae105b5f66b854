//! Benchmark-only crate; see `benches/arith.rs`.
//!
//! Run with `cargo bench -p trinoforge-bench`. For quick one-off numbers
//! at arbitrary degree the CLI's `trinoforge bench` subcommand is lighter.

pub use trinoforge;
