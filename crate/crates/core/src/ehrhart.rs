//! Reciprocity-driven Ehrhart polynomial computation.
//!
//! A [`PointEvaluator`] knows how to count lattice points of a dilate `nP`
//! and interior lattice points of `nP`. The scheduler in [`adaptive_ehrhart`]
//! gathers `d + 1` values of `L_P` on both sides of the origin, preferring the
//! negative side whenever its last count was no larger than the positive
//! side's: by reciprocity `L_P(-n) = (-1)^d L*_P(n)`, and interior counts are
//! frequently zero for small `n`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::RationalPolynomial;

/// One sample `(x, L_P(x))` of an Ehrhart polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationPoint {
    pub x: i64,
    #[serde(with = "crate::serde_bigint")]
    pub value: BigInt,
}

impl EvaluationPoint {
    pub fn new(x: i64, value: impl Into<BigInt>) -> Self {
        EvaluationPoint { x, value: value.into() }
    }
}

/// Lattice-point oracle for one polytope.
pub trait PointEvaluator {
    /// Dimension `d` of the polytope (the degree of its Ehrhart polynomial).
    fn dimension(&self) -> usize;

    /// `#(nP ∩ Z^m)` for `n >= 1`.
    fn positive(&self, n: u64) -> Result<BigUint>;

    /// `#(relint(nP) ∩ Z^m)` for `n >= 1`.
    fn interior(&self, n: u64) -> Result<BigUint>;
}

impl<E: PointEvaluator + ?Sized> PointEvaluator for &E {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn positive(&self, n: u64) -> Result<BigUint> {
        (**self).positive(n)
    }

    fn interior(&self, n: u64) -> Result<BigUint> {
        (**self).interior(n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Cheapest-side selection with ties going to the negative side.
    #[default]
    Adaptive,
    /// `n = 1, 2, ..., d` only; the classical approach, kept for comparison.
    PositiveOnly,
}

/// An interpolated polynomial together with the points that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartComputation {
    pub dimension: usize,
    pub polynomial: RationalPolynomial,
    pub transcript: Vec<EvaluationPoint>,
}

/// The unique polynomial of degree `<= points.len() - 1` through `points`.
///
/// Uses Newton divided differences, then expands to the monomial basis.
pub fn lagrange_interpolate(points: &[EvaluationPoint]) -> Result<RationalPolynomial> {
    let mut xs: Vec<i64> = points.iter().map(|p| p.x).collect();
    xs.sort_unstable();
    if let Some(w) = xs.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateAbscissa(w[0]));
    }
    let xs: Vec<BigRational> = points.iter().map(|p| BigRational::from_integer(p.x.into())).collect();
    let mut table: Vec<BigRational> = points.iter().map(|p| BigRational::from_integer(p.value.clone())).collect();
    let m = points.len();
    for level in 1..m {
        for i in (level..m).rev() {
            table[i] = (&table[i] - &table[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // c0 + (x - x0)(c1 + (x - x1)(c2 + ...)), expanded over a common
    // denominator
    let den = table.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(m);
    for i in (0..m).rev() {
        let root = BigInt::from(points[i].x);
        coeffs.insert(0, BigInt::zero());
        for j in 0..coeffs.len() - 1 {
            let t = &coeffs[j + 1] * &root;
            coeffs[j] -= t;
        }
        coeffs[0] += table[i].numer() * (&den / table[i].denom());
    }
    Ok(RationalPolynomial::new(
        coeffs.into_iter().map(|c| BigRational::new(c, den.clone())).collect(),
    ))
}

fn signed(v: BigUint, negate: bool) -> BigInt {
    let v = BigInt::from(v);
    if negate {
        -v
    } else {
        v
    }
}

/// Collects `d + 1` points of `L_P` and interpolates.
///
/// `(0, 1)` is always the first point. At each step the negative side is
/// chosen when `cost_- <= cost_+`, where each cost is the raw count returned
/// by the most recent evaluation on that side (both start at 1).
pub fn adaptive_ehrhart<E: PointEvaluator + ?Sized>(evaluator: &E) -> Result<EhrhartComputation> {
    ehrhart_with_schedule(evaluator, Schedule::Adaptive)
}

pub fn ehrhart_with_schedule<E: PointEvaluator + ?Sized>(
    evaluator: &E,
    schedule: Schedule,
) -> Result<EhrhartComputation> {
    let d = evaluator.dimension();
    let odd = d % 2 == 1;
    let mut points = vec![EvaluationPoint::new(0, 1)];
    let (mut p, mut q) = (0u64, 0u64);
    let (mut cost_pos, mut cost_neg) = (BigUint::one(), BigUint::one());
    while points.len() <= d {
        let take_negative = match schedule {
            Schedule::Adaptive => cost_neg <= cost_pos,
            Schedule::PositiveOnly => false,
        };
        if take_negative {
            q += 1;
            let v = evaluator.interior(q)?;
            points.push(EvaluationPoint::new(-(q as i64), signed(v.clone(), odd)));
            cost_neg = v;
        } else {
            p += 1;
            let v = evaluator.positive(p)?;
            points.push(EvaluationPoint::new(p as i64, v.clone()));
            cost_pos = v;
        }
    }
    let polynomial = lagrange_interpolate(&points)?;
    Ok(EhrhartComputation {
        dimension: d,
        polynomial,
        transcript: points,
    })
}

/// Cross-checks an interpolated polynomial against two fresh counts (the next
/// unused positive and negative dilations) and checks integrality on
/// `[-(d+2), d+2]`.
pub fn verify_polynomial<E: PointEvaluator + ?Sized>(
    poly: &RationalPolynomial,
    evaluator: &E,
    transcript: &[EvaluationPoint],
) -> Result<()> {
    let d = evaluator.dimension();
    let bound = d as i64 + 2;
    for x in -bound..=bound {
        if poly.eval_integer(x).is_none() {
            return Err(Error::VerificationFailed {
                x,
                expected: "an integer".into(),
                actual: poly.eval_int(x).to_string(),
            });
        }
    }
    let next_pos = transcript.iter().map(|p| p.x).max().unwrap_or(0).max(0) + 1;
    let next_neg = transcript.iter().map(|p| -p.x).max().unwrap_or(0).max(0) + 1;

    let actual = BigInt::from(evaluator.positive(next_pos as u64)?);
    let predicted = poly.eval_integer(next_pos).unwrap();
    if predicted != actual {
        return Err(Error::verification(next_pos, predicted, &actual));
    }

    let actual = signed(evaluator.interior(next_neg as u64)?, d % 2 == 1);
    let predicted = poly.eval_integer(-next_neg).unwrap();
    if predicted != actual {
        return Err(Error::verification(-next_neg, predicted, &actual));
    }
    Ok(())
}

/// [`adaptive_ehrhart`] followed by [`verify_polynomial`].
pub fn verified_ehrhart<E: PointEvaluator + ?Sized>(evaluator: &E) -> Result<EhrhartComputation> {
    let c = adaptive_ehrhart(evaluator)?;
    verify_polynomial(&c.polynomial, evaluator, &c.transcript)?;
    Ok(c)
}

/// Checks that every transcript point lies on the polynomial.
pub fn transcript_matches(poly: &RationalPolynomial, transcript: &[EvaluationPoint]) -> bool {
    transcript
        .iter()
        .all(|p| poly.eval_int(p.x) == BigRational::from_integer(p.value.clone()))
}

/// Leading coefficient times `d!`: the normalized volume.
pub fn normalized_volume(poly: &RationalPolynomial) -> Option<BigRational> {
    let d = poly.degree()?;
    let fact: BigInt = (1..=d as u64).map(BigInt::from).product();
    Some(poly.leading()? * BigRational::from_integer(fact))
}

impl EhrhartComputation {
    pub fn is_zero_dimensional(&self) -> bool {
        self.dimension == 0 && self.polynomial == RationalPolynomial::one()
    }

    /// Number of transcript entries with a zero count; these cost nothing.
    pub fn free_points(&self) -> usize {
        self.transcript.iter().filter(|p| p.x != 0 && p.value.is_zero()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::RefCell;

    fn pts(v: &[(i64, i64)]) -> Vec<EvaluationPoint> {
        v.iter().map(|&(x, y)| EvaluationPoint::new(x, y)).collect()
    }

    #[test]
    fn interpolation_examples() {
        let line = lagrange_interpolate(&pts(&[(0, 1), (1, 2), (2, 3)])).unwrap();
        assert_eq!(line, RationalPolynomial::from_integers([1, 1]));
        let q = lagrange_interpolate(&pts(&[(-1, 0), (0, 1), (1, 3)])).unwrap();
        let half = |n| BigRational::new(BigInt::from(n), BigInt::from(2));
        assert_eq!(q, RationalPolynomial::new(vec![half(2), half(3), half(1)]));
        assert_eq!(lagrange_interpolate(&pts(&[(0, 1)])).unwrap(), RationalPolynomial::one());
        assert_eq!(
            lagrange_interpolate(&pts(&[(0, 1), (0, 2)])),
            Err(Error::DuplicateAbscissa(0))
        );
    }

    /// A `d`-dimensional unit cube: `L(n) = (n+1)^d`, `L*(n) = (n-1)^d`.
    struct Cube {
        d: usize,
        calls: RefCell<Vec<i64>>,
    }

    impl PointEvaluator for Cube {
        fn dimension(&self) -> usize {
            self.d
        }
        fn positive(&self, n: u64) -> Result<BigUint> {
            self.calls.borrow_mut().push(n as i64);
            Ok(BigUint::from(n + 1).pow(self.d as u32))
        }
        fn interior(&self, n: u64) -> Result<BigUint> {
            self.calls.borrow_mut().push(-(n as i64));
            Ok(BigUint::from(n - 1).pow(self.d as u32))
        }
    }

    #[test]
    fn zero_dimensional_needs_no_calls() {
        let c = Cube { d: 0, calls: RefCell::new(vec![]) };
        let r = adaptive_ehrhart(&c).unwrap();
        assert_eq!(r.polynomial, RationalPolynomial::one());
        assert!(c.calls.borrow().is_empty());
    }

    #[test]
    fn cube_schedule_follows_costs() {
        let c = Cube { d: 3, calls: RefCell::new(vec![]) };
        let r = adaptive_ehrhart(&c).unwrap();
        // -1 costs 0, so -2 is next (cost 1 <= 1), then +1 (8 > 1 would lose) ...
        assert_eq!(*c.calls.borrow(), vec![-1, -2, -3]);
        assert_eq!(r.polynomial, RationalPolynomial::from_integers([1, 3, 3, 1]));
        assert!(verify_polynomial(&r.polynomial, &c, &r.transcript).is_ok());
        assert_eq!(r.free_points(), 1);
    }

    #[test]
    fn perturbed_polynomial_fails_verification() {
        let c = Cube { d: 2, calls: RefCell::new(vec![]) };
        let r = adaptive_ehrhart(&c).unwrap();
        let bad = &r.polynomial + &RationalPolynomial::from_integers([0, 1]);
        assert!(matches!(
            verify_polynomial(&bad, &c, &r.transcript),
            Err(Error::VerificationFailed { .. })
        ));
        let frac = &r.polynomial + &RationalPolynomial::constant(BigRational::new(1.into(), 2.into()));
        assert!(verify_polynomial(&frac, &c, &r.transcript).is_err());
    }

    #[test]
    fn positive_only_schedule_agrees() {
        for d in 0..6 {
            let c = Cube { d, calls: RefCell::new(vec![]) };
            let a = adaptive_ehrhart(&c).unwrap();
            let b = ehrhart_with_schedule(&c, Schedule::PositiveOnly).unwrap();
            assert_eq!(a.polynomial, b.polynomial);
            assert!(b.transcript.iter().all(|p| p.x >= 0));
            assert_eq!(normalized_volume(&a.polynomial).unwrap(), BigRational::from_integer((1..=d as i64).product::<i64>().into()));
        }
    }
}
