//! Radical-inverse (Halton) sources.

use crate::error::{Error, Result};

/// Exact radical inverse of `index` in `base` as `(numerator, denominator)`.
pub fn radical_inverse(index: u64, base: u32) -> Result<(u128, u128)> {
    if base < 2 {
        return Err(Error::param(format!("Halton base must be at least 2, got {base}")));
    }
    let base = base as u128;
    let (mut num, mut den) = (0u128, 1u128);
    let mut rest = index as u128;
    while rest > 0 {
        num = num * base + rest % base;
        den *= base;
        rest /= base;
    }
    Ok((num, den))
}

/// `floor(2^scale_log2 * radical_inverse(index, base))`.
pub fn halton_point(index: u64, base: u32, scale_log2: u32) -> Result<u64> {
    if scale_log2 > 32 {
        return Err(Error::param(format!("Halton scale 2^{scale_log2} too large")));
    }
    let (num, den) = radical_inverse(index, base)?;
    Ok(((num << scale_log2) / den) as u64)
}

/// The first `2^width_log2` points of a base.
pub fn sequence(base: u32, width_log2: u32) -> Result<Vec<u64>> {
    (0..1u64 << width_log2)
        .map(|i| halton_point(i, base, width_log2))
        .collect()
}

/// Primes used as default bases, one per independent stream.
pub const DEFAULT_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
