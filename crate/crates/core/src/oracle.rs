//! Brute-force reference factorization at small degree: exhaustive
//! irreducible enumeration and trial division. Everything the fast engine
//! claims at desk scale is cross-checked against this module, so it stays
//! deliberately naive and never calls into the engine. Performance is a
//! non-goal.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::wordpoly;

pub const MAX_ENUM_DEGREE: usize = 24;
pub const MAX_FACTOR_DEGREE: usize = 48;

/// A complete factorization: irreducible factors with multiplicities,
/// ascending by (degree, coefficient encoding).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorMultiset {
    factors: Vec<(Poly, u32)>,
}

impl FactorMultiset {
    pub fn factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    /// Number of distinct irreducible factors.
    pub fn distinct_count(&self) -> usize {
        self.factors.len()
    }

    /// Number of irreducible factors counted with multiplicity.
    pub fn total_count(&self) -> u32 {
        self.factors.iter().map(|&(_, m)| m).sum()
    }

    /// Degree of the smallest factor.
    pub fn smallest_degree(&self) -> Option<usize> {
        self.factors
            .first()
            .and_then(|(f, _)| f.degree().finite())
    }

    /// Multiply everything back together.
    pub fn product(&self) -> Poly {
        let mut acc = Poly::one();
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc
    }

    /// True when the input this was computed from is irreducible.
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Cache of enumerated irreducibles, one list per degree.
#[derive(Default)]
pub struct Oracle {
    by_degree: Vec<Vec<u64>>,
}

impl Oracle {
    pub fn new() -> Oracle {
        Oracle::default()
    }

    /// All irreducible polynomials of degree exactly d, ascending by
    /// coefficient encoding.
    pub fn irreducibles(&mut self, d: usize) -> Result<&[u64]> {
        if d == 0 || d > MAX_ENUM_DEGREE {
            return Err(Error::OracleRange {
                degree: d,
                min: 1,
                max: MAX_ENUM_DEGREE,
            });
        }
        self.ensure(d);
        Ok(&self.by_degree[d - 1])
    }

    fn ensure(&mut self, d: usize) {
        while self.by_degree.len() < d {
            let next = self.by_degree.len() + 1;
            let mut found = Vec::new();
            for c in 1u64 << next..1u64 << (next + 1) {
                let divisible = self.by_degree[..next / 2]
                    .iter()
                    .flatten()
                    .any(|&f| wordpoly::rem(c, f) == 0);
                if !divisible {
                    found.push(c);
                }
            }
            self.by_degree.push(found);
        }
    }

    /// Complete factorization by trial division with ascending irreducibles,
    /// then the cofactor. Supports 1 <= degree <= 48.
    pub fn factorize(&mut self, p: &Poly) -> Result<FactorMultiset> {
        let deg = p.degree().finite().unwrap_or(0);
        if deg == 0 || deg > MAX_FACTOR_DEGREE {
            return Err(Error::OracleRange {
                degree: deg,
                min: 1,
                max: MAX_FACTOR_DEGREE,
            });
        }
        let mut n = p.to_u64().expect("degree <= 48 fits one word");
        let mut factors: Vec<(Poly, u32)> = Vec::new();
        let mut d = 1;
        while 2 * (d as i64) <= wordpoly::deg(n) {
            self.ensure(d);
            for &f in &self.by_degree[d - 1] {
                let mut mult = 0;
                loop {
                    let (q, r) = wordpoly::divrem(n, f);
                    if r != 0 {
                        break;
                    }
                    n = q;
                    mult += 1;
                }
                if mult > 0 {
                    factors.push((Poly::from_u64(f), mult));
                }
            }
            d += 1;
        }
        if wordpoly::deg(n) >= 1 {
            factors.push((Poly::from_u64(n), 1));
        }
        Ok(FactorMultiset { factors })
    }

    pub fn is_irreducible(&mut self, p: &Poly) -> Result<bool> {
        Ok(self.factorize(p)?.is_irreducible())
    }
}

/// One-shot variant of [`Oracle::irreducibles`], returning owned polys.
pub fn enumerate_irreducibles(d: usize) -> Result<Vec<Poly>> {
    let mut oracle = Oracle::new();
    Ok(oracle
        .irreducibles(d)?
        .iter()
        .map(|&f| Poly::from_u64(f))
        .collect())
}

/// One-shot variant of [`Oracle::factorize`].
pub fn factorize_small(p: &Poly) -> Result<FactorMultiset> {
    Oracle::new().factorize(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Count of degree-d irreducibles over GF(2): (1/d) sum mu(e) 2^(d/e).
    fn necklace_count(d: u64) -> u64 {
        let mobius = |mut n: u64| -> i64 {
            let mut m = 1i64;
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    n /= p;
                    if n % p == 0 {
                        return 0;
                    }
                    m = -m;
                }
                p += 1;
            }
            if n > 1 {
                m = -m;
            }
            m
        };
        let mut sum = 0i64;
        for e in 1..=d {
            if d % e == 0 {
                sum += mobius(e) * (1i64 << (d / e));
            }
        }
        (sum / d as i64) as u64
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_irreducibles(1).unwrap(),
            vec![Poly::from_u64(2), Poly::from_u64(3)]
        );
        assert_eq!(
            enumerate_irreducibles(2).unwrap(),
            vec![Poly::from_u64(0b111)]
        );
        assert_eq!(enumerate_irreducibles(4).unwrap().len(), 3);
        assert!(enumerate_irreducibles(0).is_err());
        assert!(enumerate_irreducibles(25).is_err());
    }

    #[test]
    fn enumeration_counts_match_necklace_formula() {
        let mut oracle = Oracle::new();
        for d in 1..=16usize {
            assert_eq!(
                oracle.irreducibles(d).unwrap().len() as u64,
                necklace_count(d as u64),
                "degree {d}"
            );
        }
    }

    #[test]
    fn enumeration_is_ascending() {
        let mut oracle = Oracle::new();
        let list = oracle.irreducibles(9).unwrap();
        assert!(list.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn factorization_examples() {
        // x^4+x^2+1 = (x^2+x+1)^2
        let f = factorize_small(&Poly::from_exponents(&[4, 2, 0])).unwrap();
        assert_eq!(f.factors(), &[(Poly::from_u64(0b111), 2)]);
        // x^3+1 = (x+1)(x^2+x+1)
        let f = factorize_small(&Poly::from_exponents(&[3, 0])).unwrap();
        assert_eq!(
            f.factors(),
            &[(Poly::from_u64(0b11), 1), (Poly::from_u64(0b111), 1)]
        );
        // x^7+x+1 is irreducible
        let f = factorize_small(&Poly::from_exponents(&[7, 1, 0])).unwrap();
        assert!(f.is_irreducible());
    }

    #[test]
    fn factorization_guards() {
        assert!(factorize_small(&Poly::zero()).is_err());
        assert!(factorize_small(&Poly::one()).is_err());
        assert!(factorize_small(&Poly::monomial(49)).is_err());
    }

    #[test]
    fn product_reconstructs_random_inputs() {
        let mut rng = StdRng::seed_from_u64(11);
        let mut oracle = Oracle::new();
        for _ in 0..40 {
            let deg = rng.random_range(1..=32);
            let p = Poly::random(&mut rng, deg);
            let f = oracle.factorize(&p).unwrap();
            assert_eq!(f.product(), p, "p={p}");
            for (factor, _) in f.factors() {
                assert!(oracle.is_irreducible(factor).unwrap(), "factor {factor}");
            }
        }
    }

    #[test]
    fn single_factor_iff_enumerated() {
        let mut oracle = Oracle::new();
        for d in [6usize, 7] {
            let irr: Vec<u64> = oracle.irreducibles(d).unwrap().to_vec();
            for c in 1u64 << d..1u64 << (d + 1) {
                let f = oracle.factorize(&Poly::from_u64(c)).unwrap();
                assert_eq!(f.is_irreducible(), irr.contains(&c), "c={c:#b}");
            }
        }
    }
}
