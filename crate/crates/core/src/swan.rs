//! Swan's parity filter: from the congruence classes of (r, s) alone, decide
//! the parity of the number of irreducible factors of x^r + x^s + 1. Even
//! parity forces reducibility, so those candidates never need arithmetic.
//!
//! Trinomials with r, s not both even are squarefree: the derivative is
//! x^(r-1) or x^(s-1) (coprime to T, whose constant term is 1), or, with
//! both exponents odd, x^(s-1) * (x^(r-s) + 1), and a common root alpha of
//! T and x^(r-s) + 1 would give T(alpha) = 2*alpha^s + 1 = 1. So "number of
//! irreducible factors" needs no multiplicity caveats here. Both-even
//! trinomials are perfect squares and are handled as always-reducible
//! without a parity.
//!
//! The case table below is Swan's trinomial corollary. It is transcribed
//! from the literature, so the test suite gates it with an exhaustive
//! factor-count comparison against the brute-force oracle for every
//! trinomial of degree <= 30.

use crate::ring::Trinomial;
use crate::{Error, Result};

/// Parity of the count of distinct irreducible factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity of the factor count of x^r + x^s + 1 for r, s not both even.
/// With both exponents odd, the reciprocal (r, r-s) has the same factor
/// count and exactly one odd exponent, so the case table applies there.
pub fn factor_parity(t: &Trinomial) -> Result<Parity> {
    let (r, s) = (t.r(), t.s());
    match (r % 2, s % 2) {
        (0, 0) => Err(Error::ParityUndefined),
        (1, 1) => factor_parity(&t.reciprocal()),
        (0, 1) => {
            // r even, s odd: even count iff r != 2s and rs/2 = 0 or 1 (mod 4)
            let rs_half = (r as u128 / 2) * s as u128;
            Ok(parity(r != 2 * s && rs_half % 4 <= 1))
        }
        (1, 0) => {
            // r odd, s even: split on whether s divides 2r
            let even = if (2 * r) % s == 0 {
                r % 8 == 1 || r % 8 == 7
            } else {
                r % 8 == 3 || r % 8 == 5
            };
            Ok(parity(even))
        }
        _ => unreachable!(),
    }
}

fn parity(even: bool) -> Parity {
    if even {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// True when x^r + x^s + 1 is guaranteed reducible with no arithmetic:
/// either both exponents are even (a perfect square) or the factor count
/// is even. False marks a survivor that still has to be tested.
pub fn rules_out(t: &Trinomial) -> bool {
    match factor_parity(t) {
        Err(_) => true, // both even: T = (x^(r/2) + x^(s/2) + 1)^2
        Ok(p) => p == Parity::Even,
    }
}

/// The s in [1, r/2] not ruled out, ascending. Meaningful for odd r (the
/// search regime); s and its reciprocal r-s never both appear since
/// s <= r/2.
pub fn surviving_s(r: u64) -> impl Iterator<Item = u64> {
    debug_assert!(r % 2 == 1, "survivor enumeration expects odd r");
    (1..=r / 2).filter(move |&s| !rules_out(&Trinomial::new(r, s).unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(r: u64, s: u64) -> Trinomial {
        Trinomial::new(r, s).unwrap()
    }

    #[test]
    fn parity_examples() {
        assert_eq!(factor_parity(&t(7, 1)).unwrap(), Parity::Odd);
        assert_eq!(factor_parity(&t(13, 4)).unwrap(), Parity::Even);
        assert_eq!(factor_parity(&t(8, 3)).unwrap(), Parity::Even);
        assert!(matches!(
            factor_parity(&t(8, 4)),
            Err(Error::ParityUndefined)
        ));
    }

    #[test]
    fn rules_out_examples() {
        assert!(rules_out(&t(13, 4)));
        assert!(!rules_out(&t(7, 1)));
        // 57885161 = 1 (mod 8) with s even, s not dividing 2r: a survivor.
        assert!(!rules_out(&t(57_885_161, 2_500_000)));
        // perfect square
        assert!(rules_out(&t(10, 4)));
    }

    #[test]
    fn survivors_small_r() {
        let surv = |r| surviving_s(r).collect::<Vec<_>>();
        assert_eq!(surv(3), vec![1]);
        assert_eq!(surv(5), vec![2]);
        assert_eq!(surv(7), vec![1, 3]);
        assert_eq!(surv(13), vec![2]);
        assert_eq!(surv(17), vec![1, 3, 4, 5, 6, 7, 8]);
    }

    #[test]
    fn reciprocal_consistency() {
        for r in 2..=40u64 {
            for s in 1..r {
                let a = factor_parity(&t(r, s));
                let b = factor_parity(&t(r, r - s));
                match (a, b) {
                    (Ok(pa), Ok(pb)) => assert_eq!(pa, pb, "r={r} s={s}"),
                    (Err(_), Err(_)) => {}
                    other => panic!("definedness differs for r={r} s={s}: {other:?}"),
                }
            }
        }
    }
}
