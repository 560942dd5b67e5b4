//! Univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact polynomial `a0 + a1*n + a2*n^2 + ...`; the coefficient vector never
/// ends in a zero, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(|c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The monomial `c * n^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        let (num, den) = self.integer_form();
        let x = BigInt::from(x);
        let mut acc = BigInt::zero();
        for c in num.iter().rev() {
            acc = acc * &x + c;
        }
        BigRational::new(acc, den)
    }

    /// `(N, D)` with `self = N / D`, `N` integral and `D > 0` the least
    /// common denominator of the coefficients.
    pub fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        (num, den)
    }

    /// Value at an integer argument, or `None` if it is not an integer.
    pub fn eval_integer(&self, x: i64) -> Option<BigInt> {
        let v = self.eval_int(x);
        v.is_integer().then(|| v.to_integer())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `self(a + b*n)`.
    pub fn compose_linear(&self, a: &BigRational, b: &BigRational) -> Self {
        let lin = Self::new(vec![a.clone(), b.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead = divisor.leading()?.clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Divides by the absolute value of the leading coefficient. Signs are
    /// preserved, which is all a Sturm chain needs.
    fn normalized(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(BigRational::one() / l.abs())),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.normalized(), other.normalized());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).unwrap();
            a = b;
            b = r.normalized();
        }
        match a.leading() {
            Some(l) => a.scale(&(BigRational::one() / l)),
            None => a,
        }
    }

    /// `self / gcd(self, self')`: same roots, each of multiplicity one.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        Ok(self.div_rem(&g).unwrap().0)
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.normalized()];
        if self.is_zero() {
            return seq;
        }
        let mut next = self.derivative().normalized();
        while !next.is_zero() {
            let (_, r) = seq.last().unwrap().div_rem(&next).unwrap();
            seq.push(next);
            next = (-r).normalized();
        }
        seq
    }

    /// Number of distinct real roots, by Sturm's theorem on the whole line.
    pub fn count_real_roots(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let seq = self.sturm_sequence();
        let sign_at = |neg_inf: bool| -> Vec<i8> {
            seq.iter()
                .map(|p| {
                    let d = p.degree().unwrap_or(0);
                    let s = if p.leading().unwrap().is_positive() { 1 } else { -1 };
                    if neg_inf && d % 2 == 1 {
                        -s
                    } else {
                        s
                    }
                })
                .collect()
        };
        let changes = |signs: Vec<i8>| signs.windows(2).filter(|w| w[0] != w[1]).count();
        Ok(changes(sign_at(true)) - changes(sign_at(false)))
    }

    /// `true` iff every complex root is real. Decided exactly: the Sturm count
    /// of the squarefree part must equal its degree.
    pub fn is_real_rooted(&self) -> Result<bool> {
        let sf = self.squarefree_part()?;
        Ok(sf.count_real_roots()? == sf.degree().unwrap_or(0))
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Approximate complex roots by Durand-Kerner iteration. For display
    /// only; no decision is ever based on these values.
    pub fn approximate_roots(&self) -> Vec<(f64, f64)> {
        let Some(d) = self.degree() else { return Vec::new() };
        if d == 0 {
            return Vec::new();
        }
        let to_f = |c: &BigRational| -> f64 {
            let (n, dn) = (c.numer().to_string(), c.denom().to_string());
            n.parse::<f64>().unwrap_or(0.0) / dn.parse::<f64>().unwrap_or(1.0)
        };
        let lead = to_f(&self.coeffs[d]);
        let a: Vec<f64> = self.coeffs.iter().map(|c| to_f(c) / lead).collect();
        let eval = |z: (f64, f64)| {
            let mut acc = (0.0, 0.0);
            for c in a.iter().rev() {
                acc = (acc.0 * z.0 - acc.1 * z.1 + c, acc.0 * z.1 + acc.1 * z.0);
            }
            acc
        };
        let radius = 1.0 + a[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let mut roots: Vec<(f64, f64)> = (0..d)
            .map(|k| {
                let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64;
                (radius * t.cos(), radius * t.sin())
            })
            .collect();
        for _ in 0..2000 {
            let mut delta = 0.0f64;
            for i in 0..d {
                let zi = roots[i];
                let num = eval(zi);
                let mut den = (1.0, 0.0);
                for (j, zj) in roots.iter().enumerate() {
                    if j != i {
                        let diff = (zi.0 - zj.0, zi.1 - zj.1);
                        den = (den.0 * diff.0 - den.1 * diff.1, den.0 * diff.1 + den.1 * diff.0);
                    }
                }
                let norm = den.0 * den.0 + den.1 * den.1;
                if norm == 0.0 {
                    continue;
                }
                let q = ((num.0 * den.0 + num.1 * den.1) / norm, (num.1 * den.0 - num.0 * den.1) / norm);
                roots[i] = (zi.0 - q.0, zi.1 - q.1);
                delta = delta.max(q.0.abs() + q.1.abs());
            }
            if delta < 1e-14 {
                break;
            }
        }
        roots.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        roots
    }

    /// Human-readable form in the variable `var`, lowest degree first.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let mag_s = if mag.is_integer() {
                mag.to_integer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            match i {
                0 => out.push_str(&mag_s),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&mag_s);
                        out.push('*');
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push('^');
                        out.push_str(&i.to_string());
                    }
                }
            }
        }
        out
    }

    /// Coefficients as `"p/q"` strings (`"p"` for integers), lowest first.
    pub fn to_rational_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_to_string).collect()
    }

    pub fn from_rational_strings<S: AsRef<str>>(coeffs: &[S]) -> Result<Self> {
        coeffs
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

pub fn rational_to_string(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("n"))
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn add(self, rhs: Self) -> RationalPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn sub(self, rhs: Self) -> RationalPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: Self) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }
}

impl Neg for RationalPolynomial {
    type Output = RationalPolynomial;

    fn neg(self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_integers(c.iter().copied())
    }

    #[test]
    fn arithmetic_and_trimming() {
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[1, 2, 0]).degree(), Some(1));
        assert_eq!(&p(&[1, 1]) * &p(&[1, 1]), p(&[1, 2, 1]));
        let (q, r) = p(&[-1, 0, 1]).div_rem(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[1, 2, 1]).gcd(&p(&[-1, 0, 1])), p(&[1, 1]));
    }

    #[test]
    fn composition_with_linear_map() {
        // (n+1)^2 at n = -2 - t is (t+1)^2
        let sq = p(&[1, 2, 1]);
        let r = sq.compose_linear(&BigRational::from_integer((-2).into()), &BigRational::from_integer((-1).into()));
        assert_eq!(r, sq);
    }

    #[test]
    fn real_rootedness_small_cases() {
        assert!(p(&[1, 4, 1]).is_real_rooted().unwrap());
        assert!(!p(&[1, 0, 1]).is_real_rooted().unwrap());
        assert!(p(&[1, 2, 1]).is_real_rooted().unwrap());
        assert!(p(&[5]).is_real_rooted().unwrap());
        assert_eq!(RationalPolynomial::zero().is_real_rooted(), Err(Error::ZeroPolynomial));
        // (n-1)^3 (n+2): repeated root handled through the squarefree part
        let q = &(&(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert_eq!(q.squarefree_part().unwrap().degree(), Some(2));
        assert!(q.is_real_rooted().unwrap());
    }

    #[test]
    fn text_and_string_forms() {
        let q = RationalPolynomial::new(vec![
            BigRational::from_integer(1.into()),
            BigRational::new(3.into(), 2.into()),
            BigRational::new((-1).into(), 2.into()),
        ]);
        assert_eq!(q.to_text("n"), "1 + 3/2*n - 1/2*n^2");
        assert_eq!(q.to_rational_strings(), vec!["1", "3/2", "-1/2"]);
        assert_eq!(RationalPolynomial::from_rational_strings(&q.to_rational_strings()).unwrap(), q);
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn approximate_roots_of_quadratic() {
        let roots = p(&[2, -3, 1]).approximate_roots();
        assert!((roots[0].0 - 1.0).abs() < 1e-9 && (roots[1].0 - 2.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn quadratics_agree_with_discriminant(a in -20i64..=20, b in -20i64..=20, c in -20i64..=20) {
            prop_assume!(c != 0);
            let disc = b * b - 4 * a * c;
            prop_assert_eq!(p(&[a, b, c]).is_real_rooted().unwrap(), disc >= 0);
        }

        #[test]
        fn adding_an_irreducible_quadratic_factor_breaks_real_rootedness(
            roots in proptest::collection::vec(-6i64..=6, 0..6)
        ) {
            let mut q = p(&[1]);
            for r in &roots {
                q = &q * &p(&[-r, 1]);
            }
            prop_assert!(q.is_real_rooted().unwrap());
            let bad = &q * &p(&[1, 0, 1]);
            prop_assert!(!bad.is_real_rooted().unwrap());
            let sf = q.squarefree_part().unwrap();
            prop_assert_eq!(bad.squarefree_part().unwrap().count_real_roots().unwrap(), sf.degree().unwrap());
        }
    }
}
