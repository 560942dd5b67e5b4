//! Linear extensions: streaming descent statistics and exact counts.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::Poset;
use crate::error::{Error, Result};
use crate::hstar::HStarVector;

/// Passed to the progress hook of [`hstar_via_linext_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinextProgress {
    pub extensions: u128,
}

const REPORT_EVERY: u128 = 1 << 16;

struct Walk<'a, 'h> {
    poset: &'a Poset,
    pending: Vec<usize>,
    placed: Vec<bool>,
    word: Vec<usize>,
    tally: Vec<u128>,
    seen: u128,
    hook: &'h mut dyn FnMut(LinextProgress) -> bool,
}

impl Walk<'_, '_> {
    fn go(&mut self, descents: usize) -> Result<()> {
        let n = self.poset.len();
        if self.word.len() == n {
            self.tally[descents] += 1;
            self.seen += 1;
            if self.seen.is_multiple_of(REPORT_EVERY) && !(self.hook)(LinextProgress { extensions: self.seen }) {
                return Err(Error::Cancelled);
            }
            return Ok(());
        }
        for v in 0..n {
            if self.placed[v] || self.pending[v] != 0 {
                continue;
            }
            let des = descents + usize::from(self.word.last().is_some_and(|&u| u > v));
            self.placed[v] = true;
            self.word.push(v);
            for &c in self.poset.upper_covers(v) {
                self.pending[c] -= 1;
            }
            let r = self.go(des);
            for &c in self.poset.upper_covers(v) {
                self.pending[c] += 1;
            }
            self.word.pop();
            self.placed[v] = false;
            r?;
        }
        Ok(())
    }
}

/// Descent histogram of the linear extensions of a naturally labeled poset,
/// which is the h*-vector of its order polytope. Extensions are visited in
/// lexicographic order with `O(n)` memory.
pub fn hstar_via_linext(poset: &Poset) -> HStarVector {
    hstar_via_linext_with(poset, &mut |_| true).expect("hook never cancels")
}

/// As [`hstar_via_linext`], calling `hook` periodically; returning `false`
/// from the hook aborts with [`Error::Cancelled`].
pub fn hstar_via_linext_with(
    poset: &Poset,
    hook: &mut dyn FnMut(LinextProgress) -> bool,
) -> Result<HStarVector> {
    let n = poset.len();
    let mut walk = Walk {
        poset,
        pending: (0..n).map(|v| poset.lower_covers(v).len()).collect(),
        placed: vec![false; n],
        word: Vec::with_capacity(n),
        tally: vec![0; n + 1],
        seen: 0,
        hook,
    };
    walk.go(0)?;
    Ok(HStarVector::new(walk.tally.into_iter().map(BigInt::from).collect()))
}

/// `|L(P)|` by dynamic programming over order ideals, layer by layer.
/// Cost is proportional to the number of order ideals.
pub fn count_linear_extensions(poset: &Poset) -> Result<BigUint> {
    let n = poset.len();
    if n > 128 {
        return Err(Error::ResourceGuard(format!("linear extension count limited to 128 elements, got {n}")));
    }
    let lower_mask: Vec<u128> = (0..n)
        .map(|v| poset.lower_covers(v).iter().fold(0u128, |m, &u| m | 1 << u))
        .collect();
    let mut layer: FxHashMap<u128, BigUint> = FxHashMap::default();
    layer.insert(0, BigUint::one());
    for _ in 0..n {
        let mut next: FxHashMap<u128, BigUint> = FxHashMap::default();
        for (ideal, count) in &layer {
            for v in 0..n {
                if ideal >> v & 1 == 0 && lower_mask[v] & !ideal == 0 {
                    *next.entry(ideal | 1 << v).or_insert_with(BigUint::zero) += count;
                }
            }
        }
        layer = next;
    }
    Ok(layer.into_values().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_families() {
        assert_eq!(hstar_via_linext(&Poset::antichain(3)), HStarVector::from_i64s([1, 4, 1, 0]));
        assert_eq!(hstar_via_linext(&Poset::chain(5)), HStarVector::from_i64s([1, 0, 0, 0, 0, 0]));
        assert_eq!(count_linear_extensions(&Poset::antichain(4)).unwrap(), BigUint::from(24u8));
        assert_eq!(count_linear_extensions(&Poset::chain(10)).unwrap(), BigUint::one());
        let shape = Poset::shape_poset(&"4,3,2,1".parse().unwrap()).unwrap();
        assert_eq!(count_linear_extensions(&shape).unwrap(), BigUint::from(768u32));
    }

    #[test]
    fn fence_ten() {
        let h = hstar_via_linext(&Poset::fence(10));
        assert_eq!(h, HStarVector::from_i64s([1, 133, 2475, 12331, 20641, 12331, 2475, 133, 1, 0, 0]));
        assert_eq!(BigUint::try_from(h.sum()).unwrap(), count_linear_extensions(&Poset::fence(10)).unwrap());
    }

    #[test]
    fn cancellation() {
        let mut calls = 0;
        let r = hstar_via_linext_with(&Poset::antichain(9), &mut |p| {
            calls += 1;
            assert_eq!(p.extensions, REPORT_EVERY * calls);
            calls < 2
        });
        assert!(matches!(r, Err(Error::Cancelled)));
        assert_eq!(calls, 2);
    }
}
