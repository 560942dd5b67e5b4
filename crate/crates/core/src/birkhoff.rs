//! Magic squares and Ehrhart polynomials of Birkhoff polytopes.
//!
//! `H_ℓ(t)`, the number of `ℓ×ℓ` nonnegative integer matrices with all line
//! sums `t`, is the Ehrhart polynomial of `B_ℓ` (dimension `(ℓ-1)^2`). It
//! vanishes at `-1, .., -(ℓ-1)` and satisfies `H(-ℓ-t) = (-1)^(ℓ-1) H(t)`, so
//! about `C(ℓ-1, 2)` computed values determine it.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::count::{with_fallback, Overflow, Tally};
use crate::ehrhart::{lagrange_interpolate, EhrhartComputation, EvaluationPoint};
use crate::error::{Error, Result};

/// Largest side length attempted by [`birkhoff_ehrhart`].
pub const MAX_ELL: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BirkhoffSpec {
    ell: u32,
}

impl BirkhoffSpec {
    pub fn new(ell: u32) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidArgument("Birkhoff side length must be at least 1".into()));
        }
        Ok(BirkhoffSpec { ell })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// `(ℓ-1)^2`.
    pub fn dimension(&self) -> usize {
        let e = self.ell as usize - 1;
        e * e
    }

    /// Smallest `m` such that the values at `t = 0..m`, their mirrors and
    /// the trivial zeros give `d + 1` distinct points:
    /// `1 + (ℓ-1) + m + (m+1) >= d + 1`.
    pub fn computed_values(&self) -> u64 {
        let need = self.dimension() as u64 + 1;
        let have = u64::from(self.ell) + 1;
        need.saturating_sub(have).div_ceil(2)
    }
}

type State = SmallVec<[u16; 8]>;

struct RowFill<'a, T> {
    groups: &'a [(u16, usize)],
    out: State,
    count: &'a T,
    next: &'a mut FxHashMap<State, T>,
}

impl<T: Tally> RowFill<'_, T> {
    /// Distributes `rem` over group `g` (of which `left` columns are still
    /// open) and the groups after it, taking values below `cap` in the
    /// current group. `mult` counts the column assignments realizing it.
    fn go(&mut self, g: usize, left: usize, cap: u16, rem: u16, mult: u64) -> std::result::Result<(), Overflow> {
        if g == self.groups.len() {
            if rem != 0 {
                return Ok(());
            }
            let mut key = self.out.clone();
            key.sort_unstable_by(|a, b| b.cmp(a));
            let mut c = self.count.clone();
            if !c.scale_by(mult) {
                return Err(Overflow);
            }
            return match self.next.get_mut(&key) {
                Some(slot) => {
                    if slot.accumulate(&c) {
                        Ok(())
                    } else {
                        Err(Overflow)
                    }
                }
                None => {
                    self.next.insert(key, c);
                    Ok(())
                }
            };
        }
        let r = self.groups[g].0;
        if left == 0 {
            let (next_r, next_size) = self.groups.get(g + 1).copied().unwrap_or((0, 0));
            return self.go(g + 1, next_size, next_r + 1, rem, mult);
        }
        // values taken in this group are strictly decreasing, each used by
        // `k >= 1` of the open columns; zero takes all remaining ones
        let top = cap.min(rem + 1);
        for v in (0..top).rev() {
            let max_k = if v == 0 { left } else { left.min(usize::from(rem / v)) };
            let min_k = if v == 0 { left } else { 1 };
            let mut choose = 1u64;
            for k in 1..=max_k {
                choose = choose * (left - k + 1) as u64 / k as u64;
                if k < min_k {
                    continue;
                }
                let before = self.out.len();
                self.out.extend(std::iter::repeat_n(r - v, k));
                let m = mult.checked_mul(choose).ok_or(Overflow)?;
                self.go(g, left - k, v, rem - v * k as u16, m)?;
                self.out.truncate(before);
            }
        }
        Ok(())
    }
}

fn count_squares<T: Tally>(ell: usize, t: u16) -> std::result::Result<T, Overflow> {
    let mut states: FxHashMap<State, T> = FxHashMap::default();
    states.insert(std::iter::repeat_n(t, ell).collect(), T::unit());
    // the last row is forced by the remaining column sums
    for _ in 1..ell {
        let mut next: FxHashMap<State, T> = FxHashMap::default();
        for (state, count) in &states {
            let mut groups: Vec<(u16, usize)> = Vec::new();
            for &r in state {
                match groups.last_mut() {
                    Some((v, c)) if *v == r => *c += 1,
                    _ => groups.push((r, 1)),
                }
            }
            let mut fill = RowFill {
                groups: &groups,
                out: State::new(),
                count,
                next: &mut next,
            };
            fill.go(0, groups[0].1, groups[0].0 + 1, t, 1)?;
        }
        states = next;
    }
    let mut total = T::empty();
    for c in states.values() {
        if !total.accumulate(c) {
            return Err(Overflow);
        }
    }
    Ok(total)
}

/// `H_ℓ(t)`: `ℓ×ℓ` nonnegative integer matrices with every row and column
/// summing to `t`. Rows are filled one at a time; the state is the sorted
/// multiset of remaining column sums.
pub fn magic_square_count(ell: u32, t: u64) -> Result<BigUint> {
    if ell == 0 {
        return Err(Error::InvalidArgument("magic squares need a positive side length".into()));
    }
    let t = u16::try_from(t).map_err(|_| Error::ResourceGuard(format!("line sum {t} is too large")))?;
    let ell = ell as usize;
    Ok(with_fallback(|| count_squares::<u128>(ell, t), || count_squares::<BigUint>(ell, t)))
}

/// Positive integer magic squares with line sum `t`: subtracting one from
/// every entry gives `H_ℓ(t - ℓ)`, and there are none for `t < ℓ`.
pub fn birkhoff_interior_count(ell: u32, t: u64) -> Result<BigUint> {
    if t < u64::from(ell) {
        if ell == 0 {
            return Err(Error::InvalidArgument("magic squares need a positive side length".into()));
        }
        return Ok(BigUint::zero());
    }
    magic_square_count(ell, t - u64::from(ell))
}

/// Ehrhart polynomial of `B_ℓ` from `(0, 1)`, the zeros at `-1..-(ℓ-1)`,
/// `H_ℓ(1..m)` and the mirrored values at `-ℓ-t` for `t = 0..m`; verified
/// against `H_ℓ(m + 1)`.
pub fn birkhoff_ehrhart(ell: u32) -> Result<EhrhartComputation> {
    let spec = BirkhoffSpec::new(ell)?;
    if ell > MAX_ELL {
        return Err(Error::ResourceGuard(format!(
            "B_{ell} has dimension {}; side lengths above {MAX_ELL} are not attempted",
            spec.dimension()
        )));
    }
    let m = spec.computed_values();
    let sign_odd = (ell - 1) % 2 == 1;
    let mut points = vec![EvaluationPoint::new(0, 1)];
    for x in 1..i64::from(ell) {
        points.push(EvaluationPoint::new(-x, 0));
    }
    let mut values = vec![BigInt::from(1)];
    for t in 1..=m {
        let h = BigInt::from(magic_square_count(ell, t)?);
        points.push(EvaluationPoint::new(t as i64, h.clone()));
        values.push(h);
    }
    for (t, h) in values.iter().enumerate() {
        let mirrored = if sign_odd { -h } else { h.clone() };
        points.push(EvaluationPoint::new(-i64::from(ell) - t as i64, mirrored));
    }
    let polynomial = lagrange_interpolate(&points)?;

    let check = m + 1;
    let actual = BigInt::from(magic_square_count(ell, check)?);
    let predicted = polynomial.eval_int(check as i64);
    if !predicted.is_integer() || predicted.to_integer() != actual {
        return Err(Error::verification(check as i64, predicted, &actual));
    }
    if polynomial.degree() != Some(spec.dimension()) {
        return Err(Error::VerificationFailed {
            x: check as i64,
            expected: format!("degree {}", spec.dimension()),
            actual: format!("degree {:?}", polynomial.degree()),
        });
    }
    Ok(EhrhartComputation {
        dimension: spec.dimension(),
        polynomial,
        transcript: points,
    })
}
