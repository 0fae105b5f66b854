//! Small-factor trial stage: test every irreducible f of degree up to a
//! shallow bound against T = x^r + x^s + 1 by reducing T modulo f. Because
//! T is sparse, T mod f is just (x^r mod f) + (x^s mod f) + 1, which costs
//! O(log r) word squarings per f; no full-degree arithmetic ever happens,
//! so this stage runs at the same speed whether r is 31 or 74 million.
//!
//! x^r mod f depends only on r and is cached per f, shared by every s the
//! search visits. Scanning degrees in ascending order makes the first hit
//! the exact smallest factor degree, and the hit itself is the certificate
//! factor.
//!
//! This route is deliberately different from the oracle's: the oracle
//! divides the dense trinomial by enumerated irreducibles, while this stage
//! never materializes T at all.

use crate::poly::Poly;
use crate::wordpoly;

/// Irreducibility for a single-word candidate of degree d: f is reducible
/// iff gcd(x^(2^i) - x, f) is nontrivial for some i <= d/2.
pub(crate) fn is_irreducible_word(f: u64, d: u32) -> bool {
    let mut u = wordpoly::rem(2, f); // x mod f
    for _ in 0..d / 2 {
        u = wordpoly::sqr_mod(u, f);
        if wordpoly::gcd(u ^ 2, f) != 1 {
            return false;
        }
    }
    true
}

/// All irreducibles of degree exactly d (d <= 32), ascending. For d >= 2
/// only odd-constant candidates can be irreducible.
pub(crate) fn irreducibles_of_degree(d: u32) -> Vec<u64> {
    if d == 1 {
        return vec![0b10, 0b11];
    }
    assert!(d <= 32);
    let lo = 1u64 << d;
    let hi = 1u64 << (d + 1);
    (lo | 1..hi)
        .step_by(2)
        .filter(|&f| is_irreducible_word(f, d))
        .collect()
}

struct DegreeClass {
    d: u32,
    polys: Vec<u64>,
    /// x^r mod f for each poly, cached once per search.
    x_r_mod: Vec<u64>,
}

/// Precomputed trial-division state for one fixed r.
pub(crate) struct TrialSieve {
    depth: u32,
    classes: Vec<DegreeClass>,
}

impl TrialSieve {
    pub fn new(r: u64, depth: u32) -> TrialSieve {
        let depth = depth.min((r / 2) as u32);
        let classes = (1..=depth)
            .map(|d| {
                let polys = irreducibles_of_degree(d);
                let x_r_mod = polys.iter().map(|&f| wordpoly::pow_x_mod(r, f)).collect();
                DegreeClass { d, polys, x_r_mod }
            })
            .collect();
        TrialSieve { depth, classes }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Smallest-degree irreducible factor of x^r + x^s + 1 with degree at
    /// most `depth`, if one exists: the first hit scanning (degree,
    /// encoding) ascending.
    pub fn smallest_factor(&self, s: u64) -> Option<(u64, Poly)> {
        for class in &self.classes {
            for (&f, &x_r) in class.polys.iter().zip(&class.x_r_mod) {
                if x_r ^ wordpoly::pow_x_mod(s, f) ^ 1 == 0 {
                    return Some((class.d as u64, Poly::from_u64(f)));
                }
            }
        }
        None
    }
}
