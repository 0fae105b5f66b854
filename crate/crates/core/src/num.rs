//! Integer helpers: deterministic Miller-Rabin for 64-bit inputs.

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin over the 12-base set that covers all u64.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut e = d;
        while e != n - 1 {
            x = mulmod(x, x, n);
            e <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn is_odd_prime(n: u64) -> bool {
    n % 2 == 1 && is_prime(n)
}

/// ceil(log2 n) for n >= 1.
pub(crate) fn ceil_log2(n: u64) -> u32 {
    match n {
        0 | 1 => 0,
        _ => 64 - (n - 1).leading_zeros(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_spot_checks() {
        let primes = [2u64, 3, 5, 31, 61, 127, 521, 42_643_801, 57_885_161, 74_207_281];
        for p in primes {
            assert!(is_prime(p), "{p}");
        }
        let composites = [1u64, 9, 15, 121, 341, 561, 25_326_001, 3_215_031_751];
        for c in composites {
            assert!(!is_prime(c), "{c}");
        }
        assert!(!is_odd_prime(2));
        assert!(is_odd_prime(3));
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(74_207_281), 27);
    }
}
