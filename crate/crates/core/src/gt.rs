//! Gelfand–Tsetlin chains: Kostka numbers, strict Kostka numbers and the
//! dimension of the GT polytope.
//!
//! A GT pattern of shape `λ/μ` and weight `w = (w_1..w_k)` is a chain of
//! partitions `μ = α⁰ ⊆ α¹ ⊆ … ⊆ αᵏ = λ`, each truncated to `ℓ = len(λ)`
//! entries, subject to the interlacing inequalities
//!
//! ```text
//! α^(i-1)_j <= α^(i)_j            (lower inequality, every j)
//! α^(i)_j   <= α^(i-1)_(j-1)      (upper inequality, j >= 1)
//! ```
//!
//! and the row sums `|α^(i)| = |μ| + w_1 + … + w_i`. Integer patterns are the
//! semistandard tableaux of shape `λ/μ` and content `w`; the interior lattice
//! points of the `n`-th dilate are the patterns in which every inequality not
//! forced to be an equality holds strictly.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::combinatorics::{SkewShape, WeightVector};
use crate::count::{with_fallback, Overflow, Tally};
use crate::ehrhart::{self, EhrhartComputation, PointEvaluator};
use crate::error::{Error, Result};
use crate::lp::{self, Affine};

type Row = SmallVec<[u32; 8]>;

/// Shape, zero-stripped weight and the number of tracked rows `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GTChainSpec {
    shape: SkewShape,
    weight: WeightVector,
}

impl GTChainSpec {
    /// Zero entries of `weight` are dropped: they force `α^(i) = α^(i-1)`.
    pub fn new(shape: SkewShape, weight: WeightVector) -> Self {
        GTChainSpec {
            shape,
            weight: weight.without_zeros(),
        }
    }

    pub fn shape(&self) -> &SkewShape {
        &self.shape
    }

    pub fn weight(&self) -> &WeightVector {
        &self.weight
    }

    /// `ℓ`, the number of entries per chain row.
    pub fn rows(&self) -> usize {
        self.shape.outer().len()
    }

    /// `k`, the number of strips.
    pub fn steps(&self) -> usize {
        self.weight.len()
    }

    pub fn is_balanced(&self) -> bool {
        self.weight.total() == self.shape.size()
    }

    /// The spec for `nλ / nμ` and weight `nw`.
    pub fn scaled(&self, n: u32) -> GTChainSpec {
        GTChainSpec {
            shape: self.shape.scaled(n),
            weight: self.weight.scaled(n),
        }
    }

    fn outer_row(&self) -> Vec<u64> {
        self.shape.outer().parts().iter().map(|&p| u64::from(p)).collect()
    }

    fn inner_row(&self) -> Vec<u64> {
        (0..self.rows()).map(|j| u64::from(self.shape.inner().part(j))).collect()
    }

    /// `|α^(i)|` for `i = 0..=k`.
    fn row_sums(&self) -> Vec<u64> {
        let mut sums = vec![self.shape.inner().size()];
        for &w in self.weight.entries() {
            sums.push(sums.last().unwrap() + u64::from(w));
        }
        sums
    }
}

/// `scale_spec`: all of `λ`, `μ`, `w` multiplied by `n`.
pub fn scale_spec(spec: &GTChainSpec, n: u32) -> GTChainSpec {
    spec.scaled(n)
}

/// Which interlacing inequalities are equalities on the whole polytope, and
/// the entries whose value is pinned.
///
/// Indices: chain rows `i = 0..=k`, columns `j = 0..ℓ` (0-based). The
/// inequality flags are defined for `i >= 1`; `upper_tight(i, 0)` is always
/// false because the first column has no upper interlacing constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcedEqualityMask {
    steps: usize,
    rows: usize,
    lower: Vec<Vec<bool>>,
    upper: Vec<Vec<bool>>,
    forced: Vec<Vec<Option<u64>>>,
}

impl ForcedEqualityMask {
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `α^(i)_j = α^(i-1)_j` on the whole polytope.
    pub fn lower_tight(&self, i: usize, j: usize) -> bool {
        self.lower[i - 1][j]
    }

    /// `α^(i)_j = α^(i-1)_(j-1)` on the whole polytope.
    pub fn upper_tight(&self, i: usize, j: usize) -> bool {
        j > 0 && self.upper[i - 1][j]
    }

    /// Value of entry `(i, j)` at dilation 1 when it is pinned.
    pub fn forced_value(&self, i: usize, j: usize) -> Option<u64> {
        self.forced[i][j]
    }

    /// Number of entries of intermediate rows that are not pinned.
    pub fn free_entries(&self) -> usize {
        self.forced[1..self.steps.max(1)]
            .iter()
            .flatten()
            .filter(|v| v.is_none())
            .count()
            * usize::from(self.steps > 0)
    }

    pub fn tight_count(&self) -> usize {
        self.lower.iter().flatten().filter(|&&t| t).count() + self.upper.iter().flatten().filter(|&&t| t).count()
    }
}

/// Inequality strictness for one DP run, `[i-1][j]` for step `i`.
struct Strictness {
    lower: Vec<Vec<bool>>,
    upper: Vec<Vec<bool>>,
}

impl Strictness {
    fn none(steps: usize, rows: usize) -> Self {
        Strictness {
            lower: vec![vec![false; rows]; steps],
            upper: vec![vec![false; rows]; steps],
        }
    }

    fn from_mask(mask: &ForcedEqualityMask) -> Self {
        let flip = |m: &Vec<Vec<bool>>| m.iter().map(|r| r.iter().map(|t| !t).collect()).collect();
        Strictness {
            lower: flip(&mask.lower),
            upper: flip(&mask.upper),
        }
    }
}

/// Forward horizontal-strip DP over chain rows. `strict` decides, per
/// interlacing inequality, whether it must hold strictly.
fn count_chains<T: Tally>(spec: &GTChainSpec, strict: &Strictness) -> Result<T, Overflow> {
    let outer: Row = spec.shape.outer().parts().iter().copied().collect();
    let ell = outer.len();
    let k = spec.steps();
    let inner: Row = (0..ell).map(|j| spec.shape.inner().part(j)).collect();
    if !spec.is_balanced() {
        return Ok(T::empty());
    }
    if k == 0 {
        return Ok(if inner == outer { T::unit() } else { T::empty() });
    }
    let sums = spec.row_sums();

    let mut states: HashMap<Row, T> = HashMap::new();
    states.insert(inner, T::unit());
    let mut lo = vec![0u32; ell];
    let mut hi = vec![0u32; ell];
    for i in 1..=k {
        let remaining = k - i;
        let target = sums[i];
        let (ls, us) = (&strict.lower[i - 1], &strict.upper[i - 1]);
        let mut next: HashMap<Row, T> = HashMap::with_capacity(states.len());
        for (alpha, count) in &states {
            let mut feasible = true;
            for j in 0..ell {
                let mut l = alpha[j] + u32::from(ls[j]);
                // λ / β must still be coverable by `remaining` horizontal strips
                if j + remaining < ell {
                    l = l.max(outer[j + remaining]);
                }
                let mut h = outer[j];
                if j > 0 {
                    match alpha[j - 1].checked_sub(u32::from(us[j])) {
                        Some(v) => h = h.min(v),
                        None => feasible = false,
                    }
                }
                if l > h {
                    feasible = false;
                }
                lo[j] = l;
                hi[j] = h;
            }
            if !feasible {
                continue;
            }
            if i == k {
                if (0..ell).all(|j| lo[j] <= outer[j] && outer[j] <= hi[j]) {
                    let e = next.entry(outer.clone()).or_insert_with(T::empty);
                    if !e.accumulate(count) {
                        return Err(Overflow);
                    }
                }
                continue;
            }
            let ok = fill_rows(&lo, &hi, target, &mut |beta: &[u32]| {
                let e = next.entry(Row::from_slice(beta)).or_insert_with(T::empty);
                e.accumulate(count)
            });
            if !ok {
                return Err(Overflow);
            }
        }
        states = next;
        if states.is_empty() {
            return Ok(T::empty());
        }
    }
    Ok(states.remove(&outer).unwrap_or_else(T::empty))
}

/// Calls `emit` for every vector `lo <= β <= hi` with `Σβ = target`.
/// Stops and returns `false` as soon as `emit` does.
fn fill_rows(lo: &[u32], hi: &[u32], target: u64, emit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
    let n = lo.len();
    let mut suffix_lo = vec![0u64; n + 1];
    let mut suffix_hi = vec![0u64; n + 1];
    for j in (0..n).rev() {
        suffix_lo[j] = suffix_lo[j + 1] + u64::from(lo[j]);
        suffix_hi[j] = suffix_hi[j + 1] + u64::from(hi[j]);
    }
    if target < suffix_lo[0] || target > suffix_hi[0] {
        return true;
    }
    fn rec(
        j: usize,
        rem: u64,
        lo: &[u32],
        hi: &[u32],
        slo: &[u64],
        shi: &[u64],
        cur: &mut [u32],
        emit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if j == lo.len() {
            return rem != 0 || emit(cur);
        }
        // β_j in [lo_j, hi_j] with rem - β_j in [slo[j+1], shi[j+1]]
        let min = u64::from(lo[j]).max(rem.saturating_sub(shi[j + 1]));
        let max = u64::from(hi[j]).min(rem.saturating_sub(slo[j + 1]));
        if rem < slo[j + 1] {
            return true;
        }
        for v in min..=max {
            cur[j] = v as u32;
            if !rec(j + 1, rem - v, lo, hi, slo, shi, cur, emit) {
                return false;
            }
        }
        true
    }
    let mut cur = vec![0u32; n];
    rec(0, target, lo, hi, &suffix_lo, &suffix_hi, &mut cur, emit)
}

/// `K_{λ/μ, w}`: the number of semistandard tableaux of shape `λ/μ` and
/// content `w`. Zero when `|w| != |λ/μ|`.
pub fn kostka(spec: &GTChainSpec) -> BigUint {
    let strict = Strictness::none(spec.steps(), spec.rows());
    with_fallback(|| count_chains::<u128>(spec, &strict), || count_chains::<BigUint>(spec, &strict))
}

/// `K^strict` at dilation `n`: integer patterns of `nλ/nμ`, weight `nw`,
/// in which every inequality not flagged tight in `mask` is strict. By
/// reciprocity this is the interior lattice-point count of `n·GT(λ/μ, w)`.
pub fn strict_kostka(spec: &GTChainSpec, mask: &ForcedEqualityMask, n: u32) -> BigUint {
    if mask.steps != spec.steps() || mask.rows != spec.rows() {
        return BigUint::zero();
    }
    let scaled = spec.scaled(n);
    let strict = Strictness::from_mask(mask);
    with_fallback(
        || count_chains::<u128>(&scaled, &strict),
        || count_chains::<BigUint>(&scaled, &strict),
    )
}

/// Dimension of `GT(λ/μ, w)` by propagating forced values to a fixpoint.
///
/// Every entry carries an interval `[lo, hi]` valid on the whole polytope.
/// Intervals are tightened through the interlacing inequalities and through
/// the row sums (an entry is at least the row sum minus the other entries'
/// upper bounds, and symmetrically). An entry is pinned once its interval is
/// a single point.
///
/// Propagation misses equalities between two unpinned entries, such as
/// `α^(3)_2 = α^(2)_1` for `λ = (2,2,1)`, `w = (1,1,2,1)`; those are found
/// exactly by a small linear program over the unpinned entries, and the
/// dimension is the number of unpinned entries minus the rank of all
/// equalities.
pub fn gt_dimension(spec: &GTChainSpec) -> Result<(usize, ForcedEqualityMask)> {
    if !spec.is_balanced() {
        return Err(Error::SizeMismatch {
            shape: spec.shape.size(),
            weight: spec.weight.total(),
        });
    }
    if kostka(spec).is_zero() {
        return Err(Error::EmptyPolytope);
    }
    let ell = spec.rows();
    let k = spec.steps();
    let outer = spec.outer_row();
    let sums = spec.row_sums();
    let top = outer.first().copied().unwrap_or(0) as i64;

    let mut lo: Vec<Vec<i64>> = vec![vec![0; ell]; k + 1];
    let mut hi: Vec<Vec<i64>> = vec![vec![top; ell]; k + 1];
    let inner = spec.inner_row();
    for j in 0..ell {
        lo[0][j] = inner[j] as i64;
        hi[0][j] = inner[j] as i64;
        lo[k][j] = outer[j] as i64;
        hi[k][j] = outer[j] as i64;
    }

    loop {
        let mut changed = false;
        for i in 1..=k {
            for j in 0..ell {
                if lo[i - 1][j] > lo[i][j] {
                    lo[i][j] = lo[i - 1][j];
                    changed = true;
                }
                if hi[i][j] < hi[i - 1][j] {
                    hi[i - 1][j] = hi[i][j];
                    changed = true;
                }
                if j > 0 {
                    if hi[i - 1][j - 1] < hi[i][j] {
                        hi[i][j] = hi[i - 1][j - 1];
                        changed = true;
                    }
                    if lo[i][j] > lo[i - 1][j - 1] {
                        lo[i - 1][j - 1] = lo[i][j];
                        changed = true;
                    }
                }
            }
        }
        for i in 1..k {
            let target = sums[i] as i64;
            let sum_lo: i64 = lo[i].iter().sum();
            let sum_hi: i64 = hi[i].iter().sum();
            for j in 0..ell {
                let new_lo = target - (sum_hi - hi[i][j]);
                let new_hi = target - (sum_lo - lo[i][j]);
                if new_lo > lo[i][j] {
                    lo[i][j] = new_lo;
                    changed = true;
                }
                if new_hi < hi[i][j] {
                    hi[i][j] = new_hi;
                    changed = true;
                }
            }
        }
        if (0..=k).any(|i| (0..ell).any(|j| lo[i][j] > hi[i][j])) {
            return Err(Error::EmptyPolytope);
        }
        if !changed {
            break;
        }
    }

    let mut forced: Vec<Vec<Option<u64>>> = (0..=k)
        .map(|i| {
            (0..ell)
                .map(|j| (lo[i][j] == hi[i][j]).then_some(lo[i][j] as u64))
                .collect()
        })
        .collect();
    let (dimension, lower, upper) = affine_hull(&mut forced, &sums, k, ell);
    let mask = ForcedEqualityMask {
        steps: k,
        rows: ell,
        lower,
        upper,
        forced,
    };
    Ok((dimension, mask))
}

/// Finds the interlacing inequalities that are equalities on the polytope,
/// given the entries already pinned by interval propagation. Equalities
/// between unpinned entries are found by linear programming; entries that
/// the resulting affine hull determines are pinned as well.
fn affine_hull(
    forced: &mut [Vec<Option<u64>>],
    sums: &[u64],
    k: usize,
    ell: usize,
) -> (usize, Vec<Vec<bool>>, Vec<Vec<bool>>) {
    let mut index = vec![vec![None; ell]; k + 1];
    let mut vars = 0;
    for (i, row) in forced.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.is_none() {
                index[i][j] = Some(vars);
                vars += 1;
            }
        }
    }
    // entry (i, j) as a term list plus constant
    let entry = |i: usize, j: usize, sign: i64, a: &mut Affine| match index[i][j] {
        Some(v) => a.terms.push((v, sign)),
        None => a.constant += sign * forced[i][j].unwrap() as i64,
    };
    let mut eqs = Vec::new();
    for i in 1..k {
        if index[i].iter().all(Option::is_none) {
            continue;
        }
        let mut a = Affine {
            terms: Vec::new(),
            constant: -(sums[i] as i64),
        };
        for j in 0..ell {
            entry(i, j, 1, &mut a);
        }
        eqs.push(a);
    }
    // (step, column, is_upper, inequality)
    let mut ineqs: Vec<(usize, usize, bool, Affine)> = Vec::new();
    for i in 1..=k {
        for j in 0..ell {
            let mut pairs = vec![((i, j), (i - 1, j), false)];
            if j > 0 {
                pairs.push(((i - 1, j - 1), (i, j), true));
            }
            for ((bi, bj), (si, sj), upper) in pairs {
                if index[bi][bj].is_none() && index[si][sj].is_none() {
                    continue;
                }
                let mut a = Affine {
                    terms: Vec::new(),
                    constant: 0,
                };
                entry(bi, bj, 1, &mut a);
                entry(si, sj, -1, &mut a);
                ineqs.push((i, j, upper, a));
            }
        }
    }
    let rows: Vec<Affine> = ineqs.iter().map(|t| t.3.clone()).collect();
    let tight = lp::implicit_equalities(vars, &eqs, &rows);

    let mut system = eqs;
    system.extend(rows.into_iter().zip(&tight).filter(|(_, &t)| t).map(|(a, _)| a));
    let (rank, pinned) = solve_equalities(vars, &system);
    for (i, row) in index.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if let Some(value) = v.and_then(|v| pinned[v]) {
                forced[i][j] = Some(value);
            }
        }
    }

    let both = |a: Option<u64>, b: Option<u64>| a.is_some() && a == b;
    let mut lower: Vec<Vec<bool>> = (1..=k)
        .map(|i| (0..ell).map(|j| both(forced[i][j], forced[i - 1][j])).collect())
        .collect();
    let mut upper: Vec<Vec<bool>> = (1..=k)
        .map(|i| {
            (0..ell)
                .map(|j| j > 0 && both(forced[i][j], forced[i - 1][j - 1]))
                .collect()
        })
        .collect();
    for ((i, j, is_upper, _), t) in ineqs.iter().zip(tight) {
        if t {
            if *is_upper {
                upper[i - 1][*j] = true;
            } else {
                lower[i - 1][*j] = true;
            }
        }
    }
    (vars - rank, lower, upper)
}

/// Row-reduces `system = 0` over the rationals. Returns its rank and, for
/// each variable the system determines, that variable's value.
fn solve_equalities(vars: usize, system: &[Affine]) -> (usize, Vec<Option<u64>>) {
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut m: Vec<Vec<BigRational>> = system
        .iter()
        .map(|a| {
            let mut row = vec![BigRational::zero(); vars + 1];
            for &(v, c) in &a.terms {
                row[v] += q(c);
            }
            row[vars] = q(a.constant);
            row
        })
        .collect();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..vars {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let mut pinned = vec![None; vars];
    for (r, &col) in pivots.iter().enumerate() {
        if (0..vars).all(|c| c == col || m[r][c].is_zero()) {
            let value = -&m[r][vars];
            debug_assert!(value.is_integer() && !value.is_negative());
            pinned[col] = value.to_integer().to_u64();
        }
    }
    (rank, pinned)
}

/// Lattice-point oracle for `n·GT(λ/μ, w)`.
#[derive(Clone, Debug)]
pub struct GtEvaluator {
    spec: GTChainSpec,
    mask: ForcedEqualityMask,
    dimension: usize,
}

impl GtEvaluator {
    pub fn new(spec: GTChainSpec) -> Result<Self> {
        let (dimension, mask) = gt_dimension(&spec)?;
        Ok(GtEvaluator { spec, mask, dimension })
    }

    pub fn spec(&self) -> &GTChainSpec {
        &self.spec
    }

    pub fn mask(&self) -> &ForcedEqualityMask {
        &self.mask
    }
}

impl PointEvaluator for GtEvaluator {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn positive(&self, n: u64) -> Result<BigUint> {
        let n = u32::try_from(n).map_err(|_| Error::ResourceGuard(format!("dilation {n} too large")))?;
        Ok(kostka(&self.spec.scaled(n)))
    }

    fn interior(&self, n: u64) -> Result<BigUint> {
        let n = u32::try_from(n).map_err(|_| Error::ResourceGuard(format!("dilation {n} too large")))?;
        Ok(strict_kostka(&self.spec, &self.mask, n))
    }
}

/// Ehrhart polynomial of `GT(λ/μ, w)`: dimension, adaptive reciprocity
/// schedule, interpolation, and (when `verify` is set) a check at two fresh
/// dilations.
pub fn gt_ehrhart(spec: &GTChainSpec, verify: bool) -> Result<EhrhartComputation> {
    let ev = GtEvaluator::new(spec.clone())?;
    let c = ehrhart::adaptive_ehrhart(&ev)?;
    if verify {
        ehrhart::verify_polynomial(&c.polynomial, &ev, &c.transcript)?;
    }
    Ok(c)
}
