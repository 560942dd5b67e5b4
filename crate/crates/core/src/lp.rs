//! Implicit equalities of small integer inequality systems, by exact simplex.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A row `Σ coeff·x_var + constant >= 0`, or `= 0` for equalities.
#[derive(Clone, Debug)]
pub(crate) struct Affine {
    pub terms: Vec<(usize, i64)>,
    pub constant: i64,
}

/// For the nonempty polyhedron `{x >= 0 : eqs = 0, ineqs >= 0}`, returns
/// which inequalities hold with equality at every point.
///
/// Homogenizes with a scale `s ∈ [0, 1]` and maximizes a common slack `δ`
/// over the undecided inequalities. If the optimum is zero, every inequality
/// with a positive dual value is an implicit equality; these are moved to the
/// equalities and the LP is solved again.
pub(crate) fn implicit_equalities(vars: usize, eqs: &[Affine], ineqs: &[Affine]) -> Vec<bool> {
    let mut tight = vec![false; ineqs.len()];
    loop {
        let open: Vec<usize> = (0..ineqs.len()).filter(|&i| !tight[i]).collect();
        if open.is_empty() {
            return tight;
        }
        // columns: x (vars), s, δ, then one slack per row
        let s_col = vars;
        let d_col = vars + 1;
        let mut rows: Vec<Row> = Vec::new();
        // `-(terms) - constant·s + [δ] <= 0` encodes `terms + constant·s >= δ`
        let push = |rows: &mut Vec<Row>, a: &Affine, sign: i64, delta: bool| {
            let mut r: Vec<(usize, i64)> = a.terms.iter().map(|&(v, c)| (v, -sign * c)).collect();
            r.push((s_col, -sign * a.constant));
            if delta {
                r.push((d_col, 1));
            }
            rows.push((r, 0));
        };
        for e in eqs.iter().chain(ineqs.iter().enumerate().filter(|(i, _)| tight[*i]).map(|(_, a)| a)) {
            push(&mut rows, e, 1, false);
            push(&mut rows, e, -1, false);
        }
        let first_open = rows.len();
        for &i in &open {
            push(&mut rows, &ineqs[i], 1, true);
        }
        rows.push((vec![(s_col, 1)], 1));
        let (value, duals) = optimize(vars + 2, &rows, d_col);
        if value > 0 {
            return tight;
        }
        let mut progress = false;
        for (k, &i) in open.iter().enumerate() {
            if duals[first_open + k] > 0 {
                tight[i] = true;
                progress = true;
            }
        }
        assert!(progress, "zero optimum without a positive dual");
    }
}

/// Exact arithmetic for the tableau. Every operation may refuse (overflow),
/// in which case the program is solved again over [`BigRational`].
trait Field: Clone + PartialOrd {
    fn int(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn sign(&self) -> i8;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
}

impl Field for BigRational {
    fn int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
}

/// A reduced fraction of machine integers with a positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Small {
    n: i128,
    d: i128,
}

impl Small {
    fn new(n: i128, d: i128) -> Option<Self> {
        let g = n.gcd(&d);
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = n.checked_neg()?;
            d = d.checked_neg()?;
        }
        Some(Small { n, d })
    }
}

impl PartialOrd for Small {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        let l = self.n.checked_mul(o.d)?;
        let r = o.n.checked_mul(self.d)?;
        Some(l.cmp(&r))
    }
}

impl Field for Small {
    fn int(v: i64) -> Self {
        Small { n: v as i128, d: 1 }
    }
    fn is_zero(&self) -> bool {
        self.n == 0
    }
    fn sign(&self) -> i8 {
        self.n.signum() as i8
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        if self.d == o.d {
            return Small::new(self.n.checked_sub(o.n)?, self.d);
        }
        let n = self.n.checked_mul(o.d)?.checked_sub(o.n.checked_mul(self.d)?)?;
        Small::new(n, self.d.checked_mul(o.d)?)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Small::new(self.n.checked_mul(o.n)?, self.d.checked_mul(o.d)?)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Small::new(self.n.checked_mul(o.d)?, self.d.checked_mul(o.n)?)
    }
}

/// Overflow of [`Small`] arithmetic.
struct Overflow;

/// Dense simplex tableau for `max x_obj` subject to `A x + slack = b`,
/// `x, slack >= 0`, `b >= 0`, starting from the slack basis.
struct Tableau<F> {
    cols: usize,
    a: Vec<Vec<F>>,
    rhs: Vec<F>,
    z: Vec<F>,
    z_val: F,
    basis: Vec<usize>,
}

impl<F: Field> Tableau<F> {
    fn new(structural: usize, rows: &[Row], obj: usize) -> Result<Self, Overflow> {
        let m = rows.len();
        let cols = structural + m;
        let mut a = vec![vec![F::int(0); cols]; m];
        let mut rhs = Vec::with_capacity(m);
        for (r, (terms, b)) in rows.iter().enumerate() {
            for &(v, c) in terms {
                a[r][v] = a[r][v].sub(&F::int(-c)).ok_or(Overflow)?;
            }
            a[r][structural + r] = F::int(1);
            debug_assert!(*b >= 0);
            rhs.push(F::int(*b));
        }
        let mut z = vec![F::int(0); cols];
        z[obj] = F::int(-1);
        Ok(Tableau {
            cols,
            a,
            rhs,
            z,
            z_val: F::int(0),
            basis: (structural..cols).collect(),
        })
    }

    /// Dantzig pricing, switching to Bland's rule after a run of degenerate
    /// pivots so that cycling cannot occur.
    fn solve(&mut self) -> Result<(), Overflow> {
        let mut stalled = 0;
        loop {
            let enter = if stalled < 50 {
                let mut best: Option<usize> = None;
                for j in 0..self.cols {
                    if self.z[j].sign() < 0
                        && best.is_none_or(|b| self.z[j].partial_cmp(&self.z[b]) == Some(std::cmp::Ordering::Less))
                    {
                        best = Some(j);
                    }
                }
                best
            } else {
                (0..self.cols).find(|&j| self.z[j].sign() < 0)
            };
            let Some(enter) = enter else {
                return Ok(());
            };
            let mut best: Option<(usize, F)> = None;
            for r in 0..self.a.len() {
                if self.a[r][enter].sign() <= 0 {
                    continue;
                }
                let ratio = self.rhs[r].div(&self.a[r][enter]).ok_or(Overflow)?;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => match ratio.partial_cmp(bv).ok_or(Overflow)? {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => self.basis[r] < self.basis[*br],
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let (row, ratio) = best.expect("bounded program");
            if ratio.is_zero() {
                stalled += 1;
            } else {
                stalled = 0;
            }
            self.pivot(row, enter)?;
        }
    }

    fn pivot(&mut self, row: usize, col: usize) -> Result<(), Overflow> {
        let p = self.a[row][col].clone();
        for j in 0..self.cols {
            if !self.a[row][j].is_zero() {
                self.a[row][j] = self.a[row][j].div(&p).ok_or(Overflow)?;
            }
        }
        self.rhs[row] = self.rhs[row].div(&p).ok_or(Overflow)?;
        let pivot_row = self.a[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        let nz: Vec<usize> = (0..self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |target: &mut [F], t_rhs: &mut F| -> Result<(), Overflow> {
            let f = target[col].clone();
            for &j in &nz {
                target[j] = target[j].sub(&f.mul(&pivot_row[j]).ok_or(Overflow)?).ok_or(Overflow)?;
            }
            *t_rhs = t_rhs.sub(&f.mul(&pivot_rhs).ok_or(Overflow)?).ok_or(Overflow)?;
            Ok(())
        };
        for r in 0..self.a.len() {
            if r != row && !self.a[r][col].is_zero() {
                let (mut target, mut t_rhs) = (std::mem::take(&mut self.a[r]), self.rhs[r].clone());
                eliminate(&mut target, &mut t_rhs)?;
                self.a[r] = target;
                self.rhs[r] = t_rhs;
            }
        }
        if !self.z[col].is_zero() {
            let (mut target, mut t_rhs) = (std::mem::take(&mut self.z), self.z_val.clone());
            eliminate(&mut target, &mut t_rhs)?;
            self.z = target;
            self.z_val = t_rhs;
        }
        self.basis[row] = col;
        Ok(())
    }

    /// Dual value of row `r`: the reduced cost of its slack column.
    fn dual_sign(&self, r: usize) -> i8 {
        self.z[self.cols - self.a.len() + r].sign()
    }
}

type Row = (Vec<(usize, i64)>, i64);

fn run<F: Field>(structural: usize, rows: &[Row], obj: usize) -> Result<(i8, Vec<i8>), Overflow> {
    let mut t = Tableau::<F>::new(structural, rows, obj)?;
    t.solve()?;
    Ok((t.z_val.sign(), (0..rows.len()).map(|r| t.dual_sign(r)).collect()))
}

/// Optimal value sign and dual signs of the program, in machine arithmetic
/// when it suffices.
fn optimize(structural: usize, rows: &[Row], obj: usize) -> (i8, Vec<i8>) {
    run::<Small>(structural, rows, obj)
        .or_else(|_| run::<BigRational>(structural, rows, obj))
        .unwrap_or_else(|_| unreachable!("big rationals do not overflow"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aff(terms: &[(usize, i64)], constant: i64) -> Affine {
        Affine {
            terms: terms.to_vec(),
            constant,
        }
    }

    #[test]
    fn finds_relational_equality() {
        // a in [1, 2], c <= a, c >= a
        let ineqs = [
            aff(&[(0, 1)], -1),
            aff(&[(0, -1)], 2),
            aff(&[(0, 1), (1, -1)], 0),
            aff(&[(0, -1), (1, 1)], 0),
        ];
        assert_eq!(implicit_equalities(2, &[], &ineqs), vec![false, false, true, true]);
    }

    #[test]
    fn simplex_and_equalities() {
        // x + y = 1, x >= 0 explicit, y <= 1: nothing tight
        let eqs = [aff(&[(0, 1), (1, 1)], -1)];
        let ineqs = [aff(&[(0, 1)], 0), aff(&[(1, -1)], 1)];
        assert_eq!(implicit_equalities(2, &eqs, &ineqs), vec![false, false]);
        // x + y = 1, x >= 1: x = 1, and y <= 0 is tight too
        let ineqs = [aff(&[(0, 1)], -1), aff(&[(1, -1)], 0)];
        assert_eq!(implicit_equalities(2, &eqs, &ineqs), vec![true, true]);
    }

    #[test]
    fn machine_and_big_arithmetic_agree() {
        // max x0 subject to 3x0 + 5x1 <= 7, 2x0 - 7x1 <= 1, x0 - x1 <= 1
        let rows: Vec<Row> = vec![
            (vec![(0, 3), (1, 5)], 7),
            (vec![(0, 2), (1, -7)], 1),
            (vec![(0, 1), (1, -1)], 1),
        ];
        let small = run::<Small>(2, &rows, 0).ok().unwrap();
        let big = run::<BigRational>(2, &rows, 0).ok().unwrap();
        assert_eq!(small, big);
        assert_eq!(small.0, 1);
        let overflow = Small::int(i64::MAX).mul(&Small::int(i64::MAX)).and_then(|v| v.mul(&Small::int(4)));
        assert!(overflow.is_none());
    }
}
