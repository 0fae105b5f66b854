//! trinoforge: search for, test, and certify primitive trinomials
//! x^r + x^s + 1 over GF(2) at Mersenne-exponent degrees.
//!
//! The pipeline classifies each candidate (r, s) in three stages: a Swan
//! parity filter that rules out half the space from congruences alone, a
//! smallest-factor sieve driven by repeated modular squaring, and a full
//! irreducibility test for the survivors. Reducible candidates produce
//! portable certificates (a smallest-degree irreducible factor) that an
//! independent division-only verifier can check.

pub mod bench;
pub mod cert;
mod clmul;
pub mod engine;
pub mod error;
mod num;
pub mod oracle;
pub mod poly;
pub mod ring;
pub mod search;
pub mod swan;
mod wordpoly;

pub use cert::Certificate;
pub use clmul::{detected_square_path, square_pdep_available, SquarePath};
pub use engine::{Classifier, ClassifyConfig, SieveMode, Verdict};
pub use error::{Error, Result};
pub use oracle::{FactorMultiset, Oracle};
pub use poly::{Degree, MulAlgo, Poly};
pub use ring::{ModSquarer, Trinomial};
pub use search::{run_search, SStatus, SearchCheckpoint, SearchConfig, SearchOutcome};
pub use swan::Parity;
