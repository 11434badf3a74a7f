//! Fibonacci linear feedback shift registers.
//!
//! A polynomial is a tap mask: bit `e - 1` is set for every term `x^e`
//! (the constant term is implicit). `x^4 + x^3 + 1` is therefore `0b1100`.
//! Each step shifts the register left by one and inserts the parity of the
//! tapped bits at bit 0.

use crate::error::{Error, Result};

/// Maximal-length tap masks, indexed by register width.
const MAXIMAL_TAPS: &[(u32, &[u32])] = &[
    (2, &[2, 1]),
    (3, &[3, 2]),
    (4, &[4, 3]),
    (5, &[5, 3]),
    (6, &[6, 5]),
    (7, &[7, 6]),
    (8, &[8, 6, 5, 4]),
    (9, &[9, 5]),
    (10, &[10, 7]),
    (11, &[11, 9]),
    (12, &[12, 6, 4, 1]),
    (13, &[13, 4, 3, 1]),
    (14, &[14, 5, 3, 1]),
    (15, &[15, 14]),
    (16, &[16, 15, 13, 4]),
];

pub const MIN_WIDTH: u32 = 2;
pub const MAX_WIDTH: u32 = 16;

/// Builds a tap mask from the exponents of the non-constant terms.
pub fn polynomial_from_exponents(exponents: &[u32]) -> u64 {
    exponents
        .iter()
        .filter(|&&e| e > 0)
        .fold(0, |mask, &e| mask | 1 << (e - 1))
}

/// The documented maximal polynomial for `width`, if one is tabulated.
pub fn default_polynomial(width: u32) -> Option<u64> {
    MAXIMAL_TAPS
        .iter()
        .find(|(w, _)| *w == width)
        .map(|(_, taps)| polynomial_from_exponents(taps))
}

fn validate(polynomial: u64, width: u32) -> Result<()> {
    if !(1..=63).contains(&width) {
        return Err(Error::param(format!("LFSR width {width} out of range")));
    }
    if polynomial == 0 || polynomial >> width != 0 {
        return Err(Error::param(format!(
            "tap mask {polynomial:#b} does not fit a {width}-bit register"
        )));
    }
    Ok(())
}

/// Advances the register by one clock.
pub fn lfsr_step(state: u64, polynomial: u64, width: u32) -> Result<u64> {
    validate(polynomial, width)?;
    let mask = (1u64 << width) - 1;
    if state & mask == 0 {
        return Err(Error::param("LFSR state must be non-zero"));
    }
    Ok(step_unchecked(state & mask, polynomial, mask))
}

#[inline]
fn step_unchecked(state: u64, polynomial: u64, mask: u64) -> u64 {
    let feedback = (state & polynomial).count_ones() as u64 & 1;
    ((state << 1) | feedback) & mask
}

/// Number of steps until `seed` recurs. Returns `None` if the orbit never
/// returns to the seed (the state falls into a cycle that excludes it).
pub fn period(polynomial: u64, width: u32, seed: u64) -> Result<Option<u64>> {
    validate(polynomial, width)?;
    let mask = (1u64 << width) - 1;
    if seed & mask == 0 {
        return Err(Error::param("LFSR seed must be non-zero"));
    }
    let start = seed & mask;
    let mut state = start;
    for steps in 1..=mask {
        state = step_unchecked(state, polynomial, mask);
        if state == start {
            return Ok(Some(steps));
        }
        if state == 0 {
            return Ok(None);
        }
    }
    Ok(None)
}

/// True iff the polynomial generates all `2^width - 1` non-zero states.
pub fn is_maximal(polynomial: u64, width: u32) -> Result<bool> {
    Ok(period(polynomial, width, 1)? == Some((1u64 << width) - 1))
}

/// The first `len` register states starting from `seed` (inclusive).
pub fn sequence(polynomial: u64, width: u32, seed: u64, len: usize) -> Result<Vec<u64>> {
    validate(polynomial, width)?;
    let mask = (1u64 << width) - 1;
    if seed & mask == 0 {
        return Err(Error::param("LFSR seed must be non-zero"));
    }
    let mut state = seed & mask;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(state);
        state = step_unchecked(state, polynomial, mask);
    }
    Ok(out)
}

/// Default seed for the `index`-th independent stream of a `width`-bit LFSR.
/// Stream 0 starts at 1, stream 1 at the all-ones state; further streams
/// clear successively more low bits of the all-ones state.
pub fn default_seed(index: usize, width: u32) -> u64 {
    let mask = (1u64 << width) - 1;
    if index == 0 {
        return 1;
    }
    let cleared = ((index - 1) as u32) % width;
    let seed = mask & !((1u64 << cleared) - 1);
    if seed == 1 {
        mask
    } else {
        seed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_traced_step() {
        // x^4 + x^3 + 1: taps on bits 3 and 2. 0b1000 -> parity(0b1000) = 1,
        // shifted-out state 0b0000 plus feedback -> 0b0001.
        let poly = polynomial_from_exponents(&[4, 3]);
        assert_eq!(poly, 0b1100);
        assert_eq!(lfsr_step(0b1000, poly, 4).unwrap(), 0b0001);
        // 0b0110 -> parity(0b0100) = 1 -> 0b1101.
        assert_eq!(lfsr_step(0b0110, poly, 4).unwrap(), 0b1101);
    }

    #[test]
    fn zero_state_is_rejected() {
        assert!(lfsr_step(0, 0b1100, 4).is_err());
        assert!(sequence(0b1100, 4, 0, 4).is_err());
    }

    #[test]
    fn width4_period_from_every_seed() {
        let poly = default_polynomial(4).unwrap();
        for seed in 1..16 {
            assert_eq!(period(poly, 4, seed).unwrap(), Some(15), "seed {seed}");
        }
    }

    #[test]
    fn tabulated_polynomials_are_maximal() {
        for width in MIN_WIDTH..=MAX_WIDTH {
            let poly = default_polynomial(width).unwrap();
            assert!(is_maximal(poly, width).unwrap(), "width {width}");
        }
    }

    #[test]
    fn non_maximal_taps_are_flagged() {
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 is not primitive.
        let poly = polynomial_from_exponents(&[4, 2]);
        assert!(!is_maximal(poly, 4).unwrap());
        let p = period(poly, 4, 1).unwrap().unwrap();
        assert!(p < 15);
    }

    #[test]
    fn sequence_never_hits_zero() {
        let poly = default_polynomial(8).unwrap();
        let seq = sequence(poly, 8, 1, 600).unwrap();
        assert!(seq.iter().all(|&s| s != 0 && s < 256));
        assert_eq!(seq[255], seq[0]);
    }

    #[test]
    fn default_seeds_are_distinct_and_nonzero() {
        for width in 4..=10 {
            let seeds: Vec<u64> = (0..=width as usize).map(|k| default_seed(k, width)).collect();
            assert!(seeds.iter().all(|&s| s != 0 && s < 1 << width));
            let mut sorted = seeds.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), seeds.len(), "width {width}: {seeds:?}");
        }
    }
}
