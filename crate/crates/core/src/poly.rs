//! Dense polynomials over GF(2), packed 64 coefficients per machine word.
//!
//! Bit i of word k holds the coefficient of x^(64k + i). The word vector is
//! kept canonical: no trailing zero words, and the zero polynomial is the
//! empty vector. Addition is XOR; multiplication is carry-less schoolbook
//! under a Karatsuba layer; squaring spreads each coefficient from bit i to
//! bit 2i (Frobenius), which never needs a general product.

use rand::RngCore;
use std::cmp::Ordering;
use std::fmt;

use crate::clmul::{self, ClmulBackend, SquarePath};
use crate::error::{Error, Result};

/// Degree of a polynomial. The zero polynomial gets a sentinel that compares
/// below every finite degree, keeping degree comparisons total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    /// Finite value, or None for the zero polynomial.
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Multiplication algorithm selector; `Auto` applies the Karatsuba threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MulAlgo {
    Auto,
    Schoolbook,
    Karatsuba,
}

/// Below this many words a product is done by schoolbook directly.
pub const KARATSUBA_THRESHOLD_WORDS: usize = 40;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { words: vec![1] }
    }

    /// The polynomial x.
    pub fn x() -> Self {
        Poly { words: vec![2] }
    }

    /// x^e.
    pub fn monomial(e: usize) -> Self {
        let mut words = vec![0u64; e / 64 + 1];
        words[e / 64] = 1 << (e % 64);
        Poly { words }
    }

    /// Sum of x^e over the given exponents (duplicates cancel).
    pub fn from_exponents(exponents: &[usize]) -> Self {
        let mut p = Poly::zero();
        for &e in exponents {
            p.flip_coeff(e);
        }
        p
    }

    /// Interpret a u64 as a polynomial of degree < 64.
    pub fn from_u64(encoding: u64) -> Self {
        let mut p = Poly {
            words: vec![encoding],
        };
        p.trim();
        p
    }

    /// The integer encoding, if the degree is below 64.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Construct from little-endian words, normalizing trailing zeros.
    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Poly { words };
        p.trim();
        p
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Uniformly random polynomial of exact degree `degree`.
    pub fn random<R: RngCore + ?Sized>(rng: &mut R, degree: usize) -> Self {
        let nwords = degree / 64 + 1;
        let mut words = vec![0u64; nwords];
        for w in words.iter_mut() {
            *w = rng.next_u64();
        }
        let top = degree % 64;
        words[nwords - 1] &= (1u64 << top) | ((1u64 << top) - 1);
        words[nwords - 1] |= 1 << top;
        Poly { words }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    pub fn degree(&self) -> Degree {
        match self.words.last() {
            None => Degree::NegInf,
            Some(&w) => {
                Degree::Finite((self.words.len() - 1) * 64 + (63 - w.leading_zeros() as usize))
            }
        }
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    fn flip_coeff(&mut self, i: usize) {
        if i / 64 >= self.words.len() {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1 << (i % 64);
        self.trim();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (dst, &src) in self.words.iter_mut().zip(&other.words) {
            *dst ^= src;
        }
        self.trim();
    }

    /// Multiply by x^n.
    pub fn shl(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let word_off = n / 64;
        let bit_off = n % 64;
        let mut words = vec![0u64; self.words.len() + word_off + 1];
        for (k, &w) in self.words.iter().enumerate() {
            words[k + word_off] ^= w << bit_off;
            if bit_off > 0 {
                words[k + word_off + 1] ^= w >> (64 - bit_off);
            }
        }
        Poly::from_words(words)
    }

    /// Integer division of exponents: drop all terms below x^n.
    pub fn shr(&self, n: usize) -> Poly {
        let word_off = n / 64;
        if word_off >= self.words.len() {
            return Poly::zero();
        }
        let bit_off = n % 64;
        let src = &self.words[word_off..];
        let mut words = vec![0u64; src.len()];
        for (k, &w) in src.iter().enumerate() {
            words[k] |= w >> bit_off;
            if bit_off > 0 && k + 1 < src.len() {
                words[k] |= src[k + 1] << (64 - bit_off);
            }
        }
        Poly::from_words(words)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_with(other, MulAlgo::Auto)
    }

    pub fn mul_with(&self, other: &Poly, algo: MulAlgo) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let backend = clmul::detected_clmul();
        let mut out = vec![0u64; self.words.len() + other.words.len()];
        match algo {
            MulAlgo::Schoolbook => {
                clmul::schoolbook_xor_into(&self.words, &other.words, &mut out, backend)
            }
            MulAlgo::Auto | MulAlgo::Karatsuba => {
                let force = algo == MulAlgo::Karatsuba;
                kara_xor_into(&self.words, &other.words, &mut out, backend, force);
            }
        }
        Poly::from_words(out)
    }

    pub fn square(&self) -> Poly {
        self.square_with(clmul::detected_square_path())
    }

    /// Squaring with an explicit spread path; all paths are bit-identical.
    pub fn square_with(&self, path: SquarePath) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; 2 * self.words.len()];
        clmul::square_words(&self.words, &mut out, path);
        Poly::from_words(out)
    }

    /// Quotient and remainder: `self = q * divisor + rem`,
    /// `degree(rem) < degree(divisor)`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let Some(db) = divisor.degree().finite() else {
            return Err(Error::ZeroDivisor);
        };
        let Some(da) = self.degree().finite() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if da < db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut rem = self.words.clone();
        let mut quot = vec![0u64; (da - db) / 64 + 1];
        for i in (db..=da).rev() {
            if (rem[i / 64] >> (i % 64)) & 1 == 1 {
                let shift = i - db;
                quot[shift / 64] |= 1 << (shift % 64);
                xor_shifted(&mut rem, &divisor.words, shift);
            }
        }
        Ok((Poly::from_words(quot), Poly::from_words(rem)))
    }

    /// Remainder only; cheaper than `divrem` when the quotient is unused.
    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        let Some(db) = divisor.degree().finite() else {
            return Err(Error::ZeroDivisor);
        };
        let Some(da) = self.degree().finite() else {
            return Ok(Poly::zero());
        };
        if da < db {
            return Ok(self.clone());
        }
        let mut rem = self.words.clone();
        for i in (db..=da).rev() {
            if (rem[i / 64] >> (i % 64)) & 1 == 1 {
                xor_shifted(&mut rem, &divisor.words, i - db);
            }
        }
        Ok(Poly::from_words(rem))
    }

    /// Euclidean gcd. The result is the unique monic common divisor of
    /// maximal degree; errors when both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::UndefinedGcd);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Formal derivative: over GF(2) only odd-exponent terms survive,
    /// so this keeps odd-position bits shifted down one place.
    pub fn derivative(&self) -> Poly {
        const ODD: u64 = 0xaaaa_aaaa_aaaa_aaaa;
        let words = self.words.iter().map(|&w| (w & ODD) >> 1).collect();
        Poly::from_words(words)
    }

    /// Lowercase hex of the coefficient integer, most significant digit
    /// first, no leading zeros; the zero polynomial encodes as "0".
    pub fn to_hex(&self) -> String {
        match self.words.split_last() {
            None => "0".to_string(),
            Some((top, rest)) => {
                let mut s = format!("{top:x}");
                for w in rest.iter().rev() {
                    s.push_str(&format!("{w:016x}"));
                }
                s
            }
        }
    }

    /// Parse the hex encoding produced by [`Poly::to_hex`]. Strictly
    /// lowercase, at least one digit.
    pub fn from_hex(s: &str) -> Result<Poly> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
            return Err(Error::BadHex(s.to_string()));
        }
        let bytes = s.as_bytes();
        let mut words = vec![0u64; s.len() / 16 + 1];
        for (i, &b) in bytes.iter().rev().enumerate() {
            let nibble = match b {
                b'0'..=b'9' => (b - b'0') as u64,
                _ => (b - b'a' + 10) as u64,
            };
            words[i / 16] |= nibble << (4 * (i % 16));
        }
        Ok(Poly::from_words(words))
    }
}

/// XOR `src` shifted left by `shift` bits into `dst`. The caller guarantees
/// the shifted value fits.
fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let word_off = shift / 64;
    let bit_off = shift % 64;
    if bit_off == 0 {
        for (k, &w) in src.iter().enumerate() {
            dst[k + word_off] ^= w;
        }
    } else {
        for (k, &w) in src.iter().enumerate() {
            dst[k + word_off] ^= w << bit_off;
            let carry = w >> (64 - bit_off);
            if carry != 0 {
                dst[k + word_off + 1] ^= carry;
            }
        }
    }
}

/// Karatsuba layered over the schoolbook kernel; XORs the product into `out`.
fn kara_xor_into(a: &[u64], b: &[u64], out: &mut [u64], backend: ClmulBackend, force: bool) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    let threshold = if force { 1 } else { KARATSUBA_THRESHOLD_WORDS };
    if a.len().min(b.len()) <= threshold || a.len().max(b.len()) < 2 {
        clmul::schoolbook_xor_into(a, b, out, backend);
        return;
    }
    let m = a.len().max(b.len()).div_ceil(2);
    let (a0, a1) = a.split_at(m.min(a.len()));
    let (b0, b1) = b.split_at(m.min(b.len()));

    let mut z0 = vec![0u64; a0.len() + b0.len()];
    kara_xor_into(a0, b0, &mut z0, backend, force);
    let mut z2 = vec![0u64; a1.len() + b1.len()];
    kara_xor_into(a1, b1, &mut z2, backend, force);

    let sa = xor_pad(a0, a1);
    let sb = xor_pad(b0, b1);
    let mut z1 = vec![0u64; sa.len() + sb.len()];
    kara_xor_into(&sa, &sb, &mut z1, backend, force);
    for (dst, &src) in z1.iter_mut().zip(&z0) {
        *dst ^= src;
    }
    for (dst, &src) in z1.iter_mut().zip(&z2) {
        *dst ^= src;
    }

    for (k, &w) in z0.iter().enumerate() {
        out[k] ^= w;
    }
    for (k, &w) in z1.iter().enumerate() {
        out[k + m] ^= w;
    }
    for (k, &w) in z2.iter().enumerate() {
        out[k + 2 * m] ^= w;
    }
}

fn xor_pad(lo: &[u64], hi: &[u64]) -> Vec<u64> {
    let mut v = lo.to_vec();
    if hi.len() > v.len() {
        v.resize(hi.len(), 0);
    }
    for (dst, &src) in v.iter_mut().zip(hi) {
        *dst ^= src;
    }
    v
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Order by the coefficient integer; used for deterministic factor listings.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_hex())
    }
}
