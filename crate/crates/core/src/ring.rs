//! Arithmetic modulo a trinomial T = x^r + x^s + 1 using sparse reduction:
//! each monomial x^(r+k) rewrites to x^(s+k) + x^k, applied a word at a time
//! from the top, so the dense modulus never enters a product or division.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::{clmul, SquarePath};

/// The pair (r, s) standing for x^r + x^s + 1. Always 0 < s < r; search
/// contexts additionally restrict to s <= r/2 (reciprocal symmetry).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Trinomial {
    r: u64,
    s: u64,
}

impl Trinomial {
    pub fn new(r: u64, s: u64) -> Result<Self> {
        if s == 0 || s >= r {
            return Err(Error::InvalidTrinomial { r, s });
        }
        Ok(Trinomial { r, s })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    /// x^r + x^(r-s) + 1, which has the same factorization shape.
    pub fn reciprocal(&self) -> Trinomial {
        Trinomial {
            r: self.r,
            s: self.r - self.s,
        }
    }

    /// True when s lies in the canonical search half s <= r/2.
    pub fn in_search_range(&self) -> bool {
        2 * self.s <= self.r
    }

    /// Materialize the dense polynomial; only cold paths want this.
    pub fn dense(&self) -> Poly {
        Poly::from_exponents(&[self.r as usize, self.s as usize, 0])
    }

    /// Remainder of `p` modulo T, for any input degree.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let r_words = self.r.div_ceil(64) as usize;
        let mut buf = p.words().to_vec();
        if buf.len() < r_words {
            return p.clone();
        }
        reduce_in_place(&mut buf, self.r, self.s);
        Poly::from_words(buf)
    }

    /// a^2 mod T for a reduced operand (degree < r).
    pub fn modsquare(&self, a: &Poly) -> Result<Poly> {
        let mut sq = ModSquarer::new(self);
        let mut buf = sq.buffer_from(a)?;
        sq.step(&mut buf);
        Ok(Poly::from_words(buf))
    }

    /// x^(2^d) mod T by d successive modular squarings.
    pub fn x_pow_2exp(&self, d: u64) -> Poly {
        let mut sq = ModSquarer::new(self);
        let mut buf = vec![0u64; sq.residue_words()];
        buf[0] = 2; // x, reduced because r >= 2
        for _ in 0..d {
            sq.step(&mut buf);
        }
        Poly::from_words(buf)
    }
}

impl std::fmt::Display for Trinomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x^{} + x^{} + 1", self.r, self.s)
    }
}

/// Reusable squaring workspace for one modulus. The spread buffer is
/// allocated once and reused; at degree ~74M a fresh allocation per
/// squaring is what separates 2 ms from 20.
pub struct ModSquarer {
    r: u64,
    s: u64,
    r_words: usize,
    scratch: Vec<u64>,
    path: SquarePath,
}

impl ModSquarer {
    pub fn new(t: &Trinomial) -> ModSquarer {
        let r_words = t.r.div_ceil(64) as usize;
        ModSquarer {
            r: t.r,
            s: t.s,
            r_words,
            scratch: vec![0u64; 2 * r_words],
            path: clmul::detected_square_path(),
        }
    }

    /// Words in a residue buffer (enough for degree r-1).
    pub fn residue_words(&self) -> usize {
        self.r_words
    }

    /// Copy a reduced polynomial into a residue buffer.
    pub fn buffer_from(&self, a: &Poly) -> Result<Vec<u64>> {
        if let Some(d) = a.degree().finite() {
            if d as u64 >= self.r {
                return Err(Error::OperandNotReduced {
                    found: d,
                    modulus: self.r,
                });
            }
        }
        let mut buf = vec![0u64; self.r_words];
        buf[..a.words().len()].copy_from_slice(a.words());
        Ok(buf)
    }

    /// Replace the residue in `buf` (exactly `residue_words` long) by its
    /// square mod T.
    pub fn step(&mut self, buf: &mut [u64]) {
        debug_assert_eq!(buf.len(), self.r_words);
        clmul::square_words(buf, &mut self.scratch, self.path);
        reduce_in_place(&mut self.scratch, self.r, self.s);
        buf.copy_from_slice(&self.scratch[..self.r_words]);
        debug_assert!(self.scratch[self.r_words..].iter().all(|&w| w == 0));
    }
}

/// Fold every coefficient at index >= r down via x^(r+k) = x^(s+k) + x^k,
/// sweeping word-at-a-time from the top. One sweep settles everything when
/// r - s >= 64; otherwise folds can land back above r and the outer loop
/// runs again (bounded, since the top degree strictly drops each pass).
pub(crate) fn reduce_in_place(words: &mut [u64], r: u64, s: u64) {
    let r = r as usize;
    let s = s as usize;
    let r_word = r / 64;
    loop {
        let top = match words.iter().rposition(|&w| w != 0) {
            None => return,
            Some(t) => t,
        };
        if top < r_word {
            return;
        }
        if top == r_word && 64 * r_word < r && words[r_word] >> (r - 64 * r_word) == 0 {
            return;
        }
        for k in (r_word..=top).rev() {
            let base = 64 * k;
            let masked = if base >= r {
                words[k]
            } else {
                words[k] & (!0u64 << (r - base))
            };
            if masked == 0 {
                continue;
            }
            words[k] ^= masked;
            let off = base as i64 - r as i64;
            xor_at_signed(words, masked, off + s as i64);
            xor_at_signed(words, masked, off);
        }
    }
}

/// XOR `v` into the bit position `off` (which may be negative; any bits of
/// `v` that would land below zero are guaranteed clear by the caller).
fn xor_at_signed(words: &mut [u64], v: u64, off: i64) {
    if off >= 0 {
        let wo = (off / 64) as usize;
        let bo = (off % 64) as u32;
        words[wo] ^= v << bo;
        if bo > 0 {
            let carry = v >> (64 - bo);
            if carry != 0 {
                words[wo + 1] ^= carry;
            }
        }
    } else {
        let shift = (-off) as u32;
        debug_assert!(shift < 64);
        debug_assert_eq!(v & ((1u64 << shift) - 1), 0);
        words[0] ^= v >> shift;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Degree;
    use rand::rngs::StdRng;
    use rand::{RngCore, SeedableRng};

    fn t(r: u64, s: u64) -> Trinomial {
        Trinomial::new(r, s).unwrap()
    }

    #[test]
    fn construction_guards() {
        assert!(Trinomial::new(7, 0).is_err());
        assert!(Trinomial::new(7, 7).is_err());
        assert!(Trinomial::new(7, 8).is_err());
        assert_eq!(t(7, 2).reciprocal(), t(7, 5));
    }

    #[test]
    fn reduce_examples() {
        // x^r -> x^s + 1
        let tri = t(7, 1);
        assert_eq!(tri.reduce(&Poly::monomial(7)), Poly::from_exponents(&[1, 0]));
        // x^(r+1) -> x^(s+1) + x
        assert_eq!(tri.reduce(&Poly::monomial(8)), Poly::from_exponents(&[2, 1]));
        // already reduced
        let p = Poly::from_exponents(&[6, 3, 0]);
        assert_eq!(tri.reduce(&p), p);
    }

    #[test]
    fn modsquare_examples() {
        // x^8 mod (x^7+x+1) = x^2 + x
        assert_eq!(
            t(7, 1).modsquare(&Poly::monomial(4)).unwrap(),
            Poly::from_exponents(&[2, 1])
        );
        assert_eq!(t(7, 1).modsquare(&Poly::one()).unwrap(), Poly::one());
        // x^32 mod (x^31+x^3+1) = x^4 + x
        assert_eq!(
            t(31, 3).modsquare(&Poly::monomial(16)).unwrap(),
            Poly::from_exponents(&[4, 1])
        );
        assert!(matches!(
            t(7, 1).modsquare(&Poly::monomial(7)),
            Err(Error::OperandNotReduced { found: 7, modulus: 7 })
        ));
    }

    #[test]
    fn x_pow_2exp_examples() {
        assert_eq!(t(9, 4).x_pow_2exp(0), Poly::x());
        assert_eq!(t(7, 1).x_pow_2exp(3), Poly::from_exponents(&[2, 1]));
        assert_eq!(t(31, 3).x_pow_2exp(5), Poly::from_exponents(&[4, 1]));
    }

    #[test]
    fn x_pow_2exp_chains_through_modsquare() {
        let tri = t(89, 38);
        for d in 0..12 {
            assert_eq!(
                tri.x_pow_2exp(d + 1),
                tri.modsquare(&tri.x_pow_2exp(d)).unwrap()
            );
        }
    }

    #[test]
    fn reduce_agrees_with_dense_division() {
        let mut rng = StdRng::seed_from_u64(42);
        for (r, s) in [(5, 2), (7, 1), (31, 3), (63, 1), (64, 63), (65, 64), (97, 6), (127, 126)] {
            let tri = t(r, s);
            let dense = tri.dense();
            for _ in 0..25 {
                let deg = 1 + (rng.next_u64() as usize % (4 * r as usize));
                let p = Poly::random(&mut rng, deg);
                let expect = p.rem(&dense).unwrap();
                assert_eq!(tri.reduce(&p), expect, "r={r} s={s} deg={deg}");
                if deg < r as usize {
                    assert_eq!(
                        tri.modsquare(&p).unwrap(),
                        p.square().rem(&dense).unwrap(),
                        "modsquare r={r} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn modsquare_output_is_reduced() {
        let mut rng = StdRng::seed_from_u64(1);
        let tri = t(521, 158);
        let a = Poly::random(&mut rng, 520);
        let sq = tri.modsquare(&a).unwrap();
        assert!(sq.degree() < Degree::Finite(521));
    }

    #[test]
    fn trinomial_coprime_to_x_and_x_plus_1() {
        for r in 2..=24u64 {
            for s in 1..r {
                let dense = t(r, s).dense();
                assert_eq!(dense.gcd(&Poly::x()).unwrap(), Poly::one());
                assert_eq!(
                    dense.gcd(&Poly::from_exponents(&[1, 0])).unwrap(),
                    Poly::one()
                );
            }
        }
    }
}
