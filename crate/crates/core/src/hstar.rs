//! h*-vectors and the coefficient properties reported for them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::RationalPolynomial;

/// Numerator coefficients `h*_0..h*_d` of the Ehrhart series
/// `sum L(n) z^n = (h*_0 + ... + h*_d z^d) / (1 - z)^(d+1)`.
///
/// The vector always has length `d + 1`, trailing zeros included.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HStarVector {
    #[serde(with = "crate::serde_bigint::vec")]
    entries: Vec<BigInt>,
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// h*-vector of an Ehrhart polynomial of degree `d`:
/// `h*_j = sum_{i=0..j} (-1)^i C(d+1, i) L(j - i)`.
pub fn hstar_from_ehrhart(poly: &RationalPolynomial) -> Result<HStarVector> {
    let d = poly.degree().ok_or(Error::ZeroPolynomial)?;
    let values: Vec<BigRational> = (0..=d as i64).map(|m| poly.eval_int(m)).collect();
    let mut entries = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut acc = BigRational::zero();
        for i in 0..=j {
            let term = &values[j - i] * BigRational::from_integer(binomial(d as u64 + 1, i as u64));
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if !acc.is_integer() {
            return Err(Error::NonIntegralHStar {
                index: j,
                value: crate::polynomial::rational_to_string(&acc),
            });
        }
        entries.push(acc.to_integer());
    }
    Ok(HStarVector { entries })
}

impl HStarVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        HStarVector { entries }
    }

    pub fn from_i64s<I: IntoIterator<Item = i64>>(v: I) -> Self {
        HStarVector {
            entries: v.into_iter().map(BigInt::from).collect(),
        }
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// Length minus one: the dimension of the polytope.
    pub fn dimension(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    /// `s = max { i : h*_i != 0 }`; zero for the all-zero vector.
    pub fn effective_degree(&self) -> usize {
        self.entries.iter().rposition(|h| !h.is_zero()).unwrap_or(0)
    }

    /// The nonzero prefix, as usually displayed.
    pub fn trimmed(&self) -> &[BigInt] {
        &self.entries[..=self.effective_degree().min(self.entries.len().saturating_sub(1))]
    }

    pub fn sum(&self) -> BigInt {
        self.entries.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|h| !h.is_negative())
    }

    /// `h_i = h_{s-i}` with respect to the effective degree `s`.
    pub fn is_palindromic(&self) -> bool {
        let t = self.trimmed();
        t.iter().eq(t.iter().rev())
    }

    fn has_internal_zeros(&self) -> bool {
        let t = self.trimmed();
        let first = t.iter().position(|h| !h.is_zero()).unwrap_or(0);
        t[first..].iter().any(Zero::is_zero)
    }

    /// `h_i^2 >= h_{i-1} h_{i+1}` for `0 < i < s`, entries nonnegative and
    /// without internal zeros.
    pub fn is_log_concave(&self) -> bool {
        if !self.is_nonnegative() || self.has_internal_zeros() {
            return false;
        }
        let t = self.trimmed();
        (1..t.len().saturating_sub(1)).all(|i| &t[i] * &t[i] >= &t[i - 1] * &t[i + 1])
    }

    /// Log-concavity of `h_i / C(s, i)`, compared in exact rationals.
    pub fn is_ultra_log_concave(&self) -> bool {
        if !self.is_nonnegative() || self.has_internal_zeros() {
            return false;
        }
        let t = self.trimmed();
        let s = t.len() as u64 - 1;
        let norm: Vec<BigRational> = t
            .iter()
            .enumerate()
            .map(|(i, h)| BigRational::new(h.clone(), binomial(s, i as u64)))
            .collect();
        (1..norm.len().saturating_sub(1)).all(|i| &norm[i] * &norm[i] >= &norm[i - 1] * &norm[i + 1])
    }

    pub fn to_polynomial(&self) -> RationalPolynomial {
        RationalPolynomial::new(self.entries.iter().map(|h| BigRational::from_integer(h.clone())).collect())
    }

    pub fn is_real_rooted(&self) -> Result<bool> {
        self.to_polynomial().is_real_rooted()
    }

    /// `L(n) = sum_i h*_i C(n - i + d, d)` for `n = 0..count`, i.e. the
    /// coefficients of `h*(z) / (1 - z)^(d+1)` as a power series.
    pub fn series(&self, count: usize) -> Vec<BigInt> {
        let d = self.dimension() as u64;
        (0..count as u64)
            .map(|n| {
                self.entries
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i as u64 <= n)
                    .map(|(i, h)| h * binomial(n - i as u64 + d, d))
                    .sum()
            })
            .collect()
    }
}

impl fmt::Display for HStarVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.trimmed().iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The property flags reported for an Ehrhart polynomial and its h*-vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyFlags {
    pub ehrhart_nonnegative: bool,
    pub hstar_nonnegative: bool,
    pub palindromic: bool,
    pub log_concave: bool,
    pub ultra_log_concave: bool,
    pub real_rooted: bool,
}

impl PropertyFlags {
    pub fn compute(poly: &RationalPolynomial, h: &HStarVector) -> Result<Self> {
        Ok(PropertyFlags {
            ehrhart_nonnegative: poly.has_nonnegative_coeffs(),
            hstar_nonnegative: h.is_nonnegative(),
            palindromic: h.is_palindromic(),
            log_concave: h.is_log_concave(),
            ultra_log_concave: h.is_ultra_log_concave(),
            real_rooted: h.is_real_rooted()?,
        })
    }
}
