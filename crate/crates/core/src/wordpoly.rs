//! GF(2)[x] kernels on polynomials that fit a single 64-bit word, used for
//! small-degree trial work where heap-backed `Poly` values would dominate
//! the cost.

use crate::clmul::spread32;

/// Degree as an i64; the zero polynomial maps to -1 (fine for word-sized
/// comparisons, unlike the library-level NEG_INF sentinel).
#[inline]
pub(crate) fn deg(a: u64) -> i64 {
    63 - a.leading_zeros() as i64
}

/// Remainder of a mod b; b must be nonzero.
pub(crate) fn rem(mut a: u64, b: u64) -> u64 {
    debug_assert!(b != 0);
    let db = deg(b);
    while deg(a) >= db {
        a ^= b << (deg(a) - db);
    }
    a
}

/// Quotient and remainder of a / b; b must be nonzero.
pub(crate) fn divrem(mut a: u64, b: u64) -> (u64, u64) {
    debug_assert!(b != 0);
    let db = deg(b);
    let mut q = 0u64;
    while deg(a) >= db {
        let shift = deg(a) - db;
        q |= 1 << shift;
        a ^= b << shift;
    }
    (q, a)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// a^2 mod f for deg(a) < deg(f) <= 32.
#[inline]
pub(crate) fn sqr_mod(a: u64, f: u64) -> u64 {
    debug_assert!(deg(f) <= 32 && deg(a) < deg(f));
    rem(spread32(a as u32), f)
}

/// a*x mod f.
#[inline]
pub(crate) fn mulx_mod(a: u64, f: u64, fd: u32) -> u64 {
    let shifted = a << 1;
    if shifted >> fd & 1 == 1 {
        shifted ^ f
    } else {
        shifted
    }
}

/// x^e mod f by left-to-right binary exponentiation; deg(f) <= 32.
pub(crate) fn pow_x_mod(e: u64, f: u64) -> u64 {
    let fd = deg(f) as u32;
    if fd == 0 {
        return 0;
    }
    let mut acc = rem(1, f); // 1, unless f = 1
    let mut bit = 63 - e.leading_zeros() as i64;
    if e == 0 {
        return acc;
    }
    while bit >= 0 {
        acc = sqr_mod(acc, f);
        if (e >> bit) & 1 == 1 {
            acc = mulx_mod(acc, f, fd);
        }
        bit -= 1;
    }
    acc
}
