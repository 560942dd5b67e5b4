//! Exact counters for the dynamic programs.
//!
//! Every DP is written once against [`Tally`] and first run with `u128`
//! cells; if any addition or multiplication overflows, the run is abandoned
//! and repeated with `BigUint`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub(crate) trait Tally: Clone + Sized {
    fn empty() -> Self;
    fn unit() -> Self;
    /// Returns `false` on overflow.
    #[must_use]
    fn accumulate(&mut self, rhs: &Self) -> bool;
    #[must_use]
    fn scale_by(&mut self, k: u64) -> bool;
}

impl Tally for u128 {
    fn empty() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn accumulate(&mut self, rhs: &Self) -> bool {
        match self.checked_add(*rhs) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn scale_by(&mut self, k: u64) -> bool {
        match self.checked_mul(u128::from(k)) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
}

impl Tally for BigUint {
    fn empty() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn accumulate(&mut self, rhs: &Self) -> bool {
        *self += rhs;
        true
    }
    fn scale_by(&mut self, k: u64) -> bool {
        *self *= k;
        true
    }
}

/// Marker error: a fixed-width run overflowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

/// Runs `f` with `u128` cells, falling back to `BigUint` on overflow.
pub(crate) fn with_fallback<F, G>(fast: F, slow: G) -> BigUint
where
    F: FnOnce() -> Result<u128, Overflow>,
    G: FnOnce() -> Result<BigUint, Overflow>,
{
    match fast() {
        Ok(v) => BigUint::from(v),
        Err(Overflow) => slow().expect("arbitrary precision cannot overflow"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u128_reports_overflow() {
        let mut x = u128::MAX;
        assert!(!x.accumulate(&1));
        let mut y: u128 = 1 << 100;
        assert!(!y.scale_by(1 << 40));
        let mut b = BigUint::from(u128::MAX);
        assert!(b.accumulate(&BigUint::from(1u8)));
        assert_eq!(b, BigUint::from(u128::MAX) + 1u8);
    }
}
