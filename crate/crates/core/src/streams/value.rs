use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported resolution. Streams are materialised, so 2^32 bits is
/// already far beyond anything the harness sweeps.
pub const MAX_RESOLUTION_LOG2: u32 = 32;

/// An exact fraction `numerator / 2^resolution_log2` in `[0, 1]`.
///
/// Equality via `==` is structural (`2/4 != 1/2`); use [`UnaryValue::cmp_value`]
/// or [`UnaryValue::value_eq`] to compare the represented rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnaryValue {
    numerator: u64,
    resolution_log2: u32,
}

impl UnaryValue {
    pub fn new(numerator: u64, resolution_log2: u32) -> Result<Self> {
        if resolution_log2 > MAX_RESOLUTION_LOG2 {
            return Err(Error::param(format!(
                "resolution 2^{resolution_log2} exceeds the supported maximum 2^{MAX_RESOLUTION_LOG2}"
            )));
        }
        let denominator = 1u64 << resolution_log2;
        if numerator > denominator {
            return Err(Error::param(format!(
                "numerator {numerator} exceeds denominator {denominator}"
            )));
        }
        Ok(Self {
            numerator,
            resolution_log2,
        })
    }

    pub fn zero(resolution_log2: u32) -> Self {
        Self::new(0, resolution_log2).expect("resolution within range")
    }

    pub fn one(resolution_log2: u32) -> Self {
        Self::new(1 << resolution_log2, resolution_log2).expect("resolution within range")
    }

    /// Quantizes a real number in `[0, 1]` to the nearest representable value,
    /// rounding halves up.
    pub fn quantize(x: f64, resolution_log2: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::param(format!("{x} is outside [0, 1]")));
        }
        let scaled = (x * (1u64 << resolution_log2) as f64 + 0.5).floor() as u64;
        Self::new(scaled, resolution_log2)
    }

    pub fn numerator(self) -> u64 {
        self.numerator
    }

    pub fn resolution_log2(self) -> u32 {
        self.resolution_log2
    }

    pub fn denominator(self) -> u64 {
        1 << self.resolution_log2
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator() as f64
    }

    pub fn is_zero(self) -> bool {
        self.numerator == 0
    }

    /// `1 - x` at the same resolution (a NOT gate on the stream).
    pub fn complement(self) -> Self {
        Self {
            numerator: self.denominator() - self.numerator,
            resolution_log2: self.resolution_log2,
        }
    }

    /// Compares the represented rationals exactly.
    pub fn cmp_value(self, other: Self) -> Ordering {
        let lhs = (self.numerator as u128) << other.resolution_log2;
        let rhs = (other.numerator as u128) << self.resolution_log2;
        lhs.cmp(&rhs)
    }

    pub fn value_eq(self, other: Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl fmt::Display for UnaryValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator())
    }
}

/// `round(num / den)` with ties rounded up. `den` must be non-zero.
pub fn round_half_up(num: u128, den: u128) -> u128 {
    (2 * num + den) / (2 * den)
}

/// `round(num / den)` with ties rounded to the even neighbour.
pub fn round_half_even(num: u128, den: u128) -> u128 {
    let q = num / den;
    let r = num % den;
    match (2 * r).cmp(&den) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => q + (q & 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_numerator_above_denominator() {
        assert!(UnaryValue::new(17, 4).is_err());
        assert!(UnaryValue::new(16, 4).is_ok());
    }

    #[test]
    fn exact_comparison_across_resolutions() {
        let half = UnaryValue::new(1, 1).unwrap();
        let eight_sixteenths = UnaryValue::new(8, 4).unwrap();
        assert!(half.value_eq(eight_sixteenths));
        assert_ne!(half, eight_sixteenths);
        let five = UnaryValue::new(5, 4).unwrap();
        assert_eq!(five.cmp_value(half), Ordering::Less);
    }

    #[test]
    fn display_uses_power_of_two_denominator() {
        assert_eq!(UnaryValue::new(5, 4).unwrap().to_string(), "5/16");
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(round_half_up(3, 4), 1);
        assert_eq!(round_half_up(2, 4), 1);
        assert_eq!(round_half_up(1, 4), 0);
        assert_eq!(round_half_even(2, 4), 0);
        assert_eq!(round_half_even(6, 4), 2);
        assert_eq!(round_half_even(7, 4), 2);
    }

    #[test]
    fn quantize_rounds_half_up() {
        assert_eq!(UnaryValue::quantize(0.5 / 16.0, 4).unwrap().numerator(), 1);
        assert_eq!(UnaryValue::quantize(1.0, 4).unwrap().numerator(), 16);
        assert!(UnaryValue::quantize(1.5, 4).is_err());
    }
}
