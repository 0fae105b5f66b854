//! Reducibility certificates: one text line `<r> <s> <d> <factor-hex>`
//! recording a smallest-degree irreducible factor, plus an independent
//! verifier. The verify path deliberately shares nothing with the search
//! hot loop: it rebuilds the dense trinomial and checks divisibility with
//! plain schoolbook division, re-deriving d from the factor rather than
//! trusting the field.
//!
//! File format: UTF-8 text, one certificate per line, four fields
//! separated by single spaces, decimal integers, lowercase hex; lines
//! beginning with `#` are comments; trailing newline required.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::Trinomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub r: u64,
    pub s: u64,
    pub d: u64,
    pub factor: Poly,
}

impl Certificate {
    /// Build a certificate for a factor the caller guarantees divides
    /// x^r + x^s + 1. Refuses degenerate d and factors whose degree does
    /// not match: the smallest factor of a reducible trinomial always has
    /// degree in [1, r/2].
    pub fn new(t: &Trinomial, d: u64, factor: Poly) -> Result<Certificate> {
        let (r, s) = (t.r(), t.s());
        if !t.in_search_range() {
            return Err(Error::Certificate(format!(
                "s = {s} outside the search half for r = {r}"
            )));
        }
        if d == 0 || 2 * d > r {
            return Err(Error::Certificate(format!(
                "factor degree {d} outside (0, {r}/2]"
            )));
        }
        match factor.degree().finite() {
            Some(fd) if fd as u64 == d => {}
            Some(fd) => {
                return Err(Error::Certificate(format!(
                    "stated degree {d} but factor has degree {fd}"
                )))
            }
            None => return Err(Error::Certificate("zero factor".into())),
        }
        Ok(Certificate { r, s, d, factor })
    }

    /// The on-disk line, without the newline.
    pub fn to_line(&self) -> String {
        format!("{} {} {} {}", self.r, self.s, self.d, self.factor.to_hex())
    }

    /// Parse a line structurally (field syntax and degree bookkeeping)
    /// without the divisibility check; used to reload our own output.
    pub fn parse_line(line: &str) -> Option<Certificate> {
        let mut fields = line.split(' ');
        let r: u64 = fields.next()?.parse().ok()?;
        let s: u64 = fields.next()?.parse().ok()?;
        let d: u64 = fields.next()?.parse().ok()?;
        let factor = Poly::from_hex(fields.next()?).ok()?;
        if fields.next().is_some() {
            return None;
        }
        Some(Certificate { r, s, d, factor })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// Why a line failed verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    Parse,
    Range,
    DegreeMismatch,
    NonDivisor,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::Parse => "parse",
            RejectReason::Range => "range",
            RejectReason::DegreeMismatch => "degree-mismatch",
            RejectReason::NonDivisor => "non-divisor",
        })
    }
}

/// Verify one certificate line. Accept proves the trinomial reducible;
/// minimality of d is not re-proven here (that would mean re-running the
/// sieve; factorship is what the certificate claims).
pub fn verify_line(line: &str) -> std::result::Result<Certificate, RejectReason> {
    let cert = Certificate::parse_line(line).ok_or(RejectReason::Parse)?;
    let (r, s) = (cert.r, cert.s);
    if s == 0 || 2 * s > r {
        return Err(RejectReason::Range);
    }
    let fd = match cert.factor.degree().finite() {
        Some(fd) if fd > 0 && (fd as u64) < r => fd as u64,
        _ => return Err(RejectReason::Range),
    };
    if fd != cert.d {
        return Err(RejectReason::DegreeMismatch);
    }
    let dense = Poly::from_exponents(&[r as usize, s as usize, 0]);
    match dense.rem(&cert.factor) {
        Ok(rem) if rem.is_zero() => Ok(cert),
        _ => Err(RejectReason::NonDivisor),
    }
}

/// First rejected line of a file, by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstRejection {
    pub line_number: usize,
    pub reason: RejectReason,
    pub line: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifySummary {
    pub accepted: u64,
    pub rejected: u64,
    pub first_rejection: Option<FirstRejection>,
}

impl VerifySummary {
    pub fn all_accepted(&self) -> bool {
        self.rejected == 0
    }

    fn reject(&mut self, line_number: usize, reason: RejectReason, line: &str) {
        self.rejected += 1;
        if self.first_rejection.is_none() {
            self.first_rejection = Some(FirstRejection {
                line_number,
                reason,
                line: line.to_string(),
            });
        }
    }
}

/// Verify every certificate in a file. Comment lines are skipped; a final
/// line missing its newline is rejected as a parse failure (the format
/// requires the trailing newline).
pub fn verify_file(path: &Path) -> Result<VerifySummary> {
    verify_reader(BufReader::new(File::open(path)?))
}

pub fn verify_reader<R: Read>(reader: BufReader<R>) -> Result<VerifySummary> {
    let mut summary = VerifySummary::default();
    let mut line_number = 0usize;
    let mut buf = String::new();
    let mut reader = reader;
    loop {
        buf.clear();
        let n = reader.read_line(&mut buf)?;
        if n == 0 {
            break;
        }
        line_number += 1;
        let terminated = buf.ends_with('\n');
        let line = buf.trim_end_matches('\n');
        if line.starts_with('#') && terminated {
            continue;
        }
        if !terminated {
            summary.reject(line_number, RejectReason::Parse, line);
            continue;
        }
        match verify_line(line) {
            Ok(_) => summary.accepted += 1,
            Err(reason) => summary.reject(line_number, reason, line),
        }
    }
    Ok(summary)
}
