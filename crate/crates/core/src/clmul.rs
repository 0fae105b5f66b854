//! Word-level kernels: carry-less 64x64 multiplication and coefficient
//! spreading for squaring.
//!
//! Each kernel has a portable table-driven path and, on x86_64, a hardware
//! path (PCLMULQDQ for products, BMI2 PDEP for spreading) selected once per
//! process by a runtime capability probe. Both paths are bit-identical.

use std::sync::OnceLock;

/// 8-bit to 16-bit spread table: bit i of the index maps to bit 2i.
const SPREAD8: [u16; 256] = build_spread8();

const fn build_spread8() -> [u16; 256] {
    let mut table = [0u16; 256];
    let mut i = 0;
    while i < 256 {
        let mut v = 0u16;
        let mut j = 0;
        while j < 8 {
            v |= (((i >> j) & 1) as u16) << (2 * j);
            j += 1;
        }
        table[i] = v;
        i += 1;
    }
    table
}

/// Spread the 32 coefficients of `x` to the even bit positions of a u64.
#[inline]
pub(crate) fn spread32(x: u32) -> u64 {
    (SPREAD8[(x & 0xff) as usize] as u64)
        | ((SPREAD8[((x >> 8) & 0xff) as usize] as u64) << 16)
        | ((SPREAD8[((x >> 16) & 0xff) as usize] as u64) << 32)
        | ((SPREAD8[((x >> 24) & 0xff) as usize] as u64) << 48)
}

/// How `square` spreads coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquarePath {
    /// Byte-wide spread table; works everywhere.
    Table,
    /// BMI2 `pdep` bit deposit (x86_64 only).
    Pdep,
}

/// The squaring path selected by the capability probe.
pub fn detected_square_path() -> SquarePath {
    static PATH: OnceLock<SquarePath> = OnceLock::new();
    *PATH.get_or_init(|| {
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("bmi2") {
            return SquarePath::Pdep;
        }
        SquarePath::Table
    })
}

/// True when the hardware spread path can run on this machine.
pub fn square_pdep_available() -> bool {
    detected_square_path() == SquarePath::Pdep
}

/// Square `src` into `dst` (`dst.len() == 2 * src.len()`): word i spreads
/// into words 2i and 2i+1. Every destination word is overwritten.
pub(crate) fn square_words(src: &[u64], dst: &mut [u64], path: SquarePath) {
    debug_assert_eq!(dst.len(), 2 * src.len());
    match path {
        SquarePath::Table => square_words_table(src, dst),
        #[cfg(target_arch = "x86_64")]
        SquarePath::Pdep => unsafe { square_words_pdep(src, dst) },
        #[cfg(not(target_arch = "x86_64"))]
        SquarePath::Pdep => square_words_table(src, dst),
    }
}

fn square_words_table(src: &[u64], dst: &mut [u64]) {
    for (i, &w) in src.iter().enumerate() {
        dst[2 * i] = spread32(w as u32);
        dst[2 * i + 1] = spread32((w >> 32) as u32);
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "bmi2")]
unsafe fn square_words_pdep(src: &[u64], dst: &mut [u64]) {
    use std::arch::x86_64::_pdep_u64;
    const EVEN: u64 = 0x5555_5555_5555_5555;
    for (i, &w) in src.iter().enumerate() {
        dst[2 * i] = _pdep_u64(w, EVEN);
        dst[2 * i + 1] = _pdep_u64(w >> 32, EVEN);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ClmulBackend {
    Table,
    #[cfg_attr(not(target_arch = "x86_64"), allow(dead_code))]
    Pclmul,
}

pub(crate) fn detected_clmul() -> ClmulBackend {
    static BACKEND: OnceLock<ClmulBackend> = OnceLock::new();
    *BACKEND.get_or_init(|| {
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            return ClmulBackend::Pclmul;
        }
        ClmulBackend::Table
    })
}

/// 4-bit window table for one multiplicand: entry i is the carry-less
/// product of i and `b`, at most 67 bits.
#[inline]
fn window_table(b: u64) -> [u128; 16] {
    let b = b as u128;
    let b2 = b << 1;
    let b4 = b << 2;
    let b8 = b << 3;
    [
        0,
        b,
        b2,
        b2 ^ b,
        b4,
        b4 ^ b,
        b4 ^ b2,
        b4 ^ b2 ^ b,
        b8,
        b8 ^ b,
        b8 ^ b2,
        b8 ^ b2 ^ b,
        b8 ^ b4,
        b8 ^ b4 ^ b,
        b8 ^ b4 ^ b2,
        b8 ^ b4 ^ b2 ^ b,
    ]
}

/// Portable carry-less 64x64 -> 128 product; reference kernel for the
/// schoolbook inner loop below.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn clmul64(a: u64, b: u64) -> (u64, u64) {
    let tab = window_table(b);
    let mut acc = 0u128;
    let mut k = 0;
    while k < 64 {
        acc ^= tab[((a >> k) & 0xf) as usize] << k;
        k += 4;
    }
    (acc as u64, (acc >> 64) as u64)
}

/// XOR the full product of `a` and `b` into `out`
/// (`out.len() >= a.len() + b.len()`).
pub(crate) fn schoolbook_xor_into(a: &[u64], b: &[u64], out: &mut [u64], backend: ClmulBackend) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    debug_assert!(out.len() >= a.len() + b.len());
    match backend {
        ClmulBackend::Table => schoolbook_table(a, b, out),
        #[cfg(target_arch = "x86_64")]
        ClmulBackend::Pclmul => unsafe { schoolbook_pclmul(a, b, out) },
        #[cfg(not(target_arch = "x86_64"))]
        ClmulBackend::Pclmul => schoolbook_table(a, b, out),
    }
}

fn schoolbook_table(a: &[u64], b: &[u64], out: &mut [u64]) {
    for (j, &bw) in b.iter().enumerate() {
        if bw == 0 {
            continue;
        }
        let tab = window_table(bw);
        for (i, &aw) in a.iter().enumerate() {
            if aw == 0 {
                continue;
            }
            let mut acc = 0u128;
            let mut k = 0;
            while k < 64 {
                acc ^= tab[((aw >> k) & 0xf) as usize] << k;
                k += 4;
            }
            out[i + j] ^= acc as u64;
            out[i + j + 1] ^= (acc >> 64) as u64;
        }
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2")]
unsafe fn schoolbook_pclmul(a: &[u64], b: &[u64], out: &mut [u64]) {
    use std::arch::x86_64::*;
    for (j, &bw) in b.iter().enumerate() {
        if bw == 0 {
            continue;
        }
        let vb = _mm_cvtsi64_si128(bw as i64);
        for (i, &aw) in a.iter().enumerate() {
            if aw == 0 {
                continue;
            }
            let va = _mm_cvtsi64_si128(aw as i64);
            let p = _mm_clmulepi64_si128(va, vb, 0x00);
            out[i + j] ^= _mm_cvtsi128_si64(p) as u64;
            out[i + j + 1] ^= _mm_cvtsi128_si64(_mm_unpackhi_epi64(p, p)) as u64;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clmul64_bitwise(a: u64, b: u64) -> (u64, u64) {
        let mut lo = 0u64;
        let mut hi = 0u64;
        for i in 0..64 {
            if (b >> i) & 1 == 1 {
                lo ^= a << i;
                if i > 0 {
                    hi ^= a >> (64 - i);
                }
            }
        }
        (lo, hi)
    }

    #[test]
    fn window_clmul_matches_bitwise() {
        let cases = [
            (0u64, 0u64),
            (1, 1),
            (u64::MAX, u64::MAX),
            (0x9a3c_55e1_0f77_4b2d, 0x1357_9bdf_2468_ace0),
            (1 << 63, 1 << 63),
            (0xffff_0000_ffff_0000, 3),
        ];
        for (a, b) in cases {
            assert_eq!(clmul64(a, b), clmul64_bitwise(a, b), "a={a:#x} b={b:#x}");
            assert_eq!(clmul64(a, b), clmul64(b, a));
        }
    }

    #[test]
    fn spread_table_matches_bit_loop() {
        for x in [0u32, 1, 0xffff_ffff, 0xdead_beef, 0x8000_0001] {
            let mut want = 0u64;
            for i in 0..32 {
                want |= (((x >> i) & 1) as u64) << (2 * i);
            }
            assert_eq!(spread32(x), want, "x={x:#x}");
        }
    }

    #[test]
    fn hardware_paths_match_portable() {
        let words: Vec<u64> = (0..64u64)
            .map(|i| i.wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(i as u32))
            .collect();

        if square_pdep_available() {
            let mut a = vec![0u64; 2 * words.len()];
            let mut b = vec![0u64; 2 * words.len()];
            square_words(&words, &mut a, SquarePath::Table);
            square_words(&words, &mut b, SquarePath::Pdep);
            assert_eq!(a, b);
        }

        if detected_clmul() == ClmulBackend::Pclmul {
            let mut a = vec![0u64; 2 * words.len()];
            let mut b = vec![0u64; 2 * words.len()];
            schoolbook_xor_into(&words, &words, &mut a, ClmulBackend::Table);
            schoolbook_xor_into(&words, &words, &mut b, ClmulBackend::Pclmul);
            assert_eq!(a, b);
        }
    }
}
