//! Slow brute-force counters used to cross-check the dynamic programs.
//!
//! None of these share code with the engines they check: tableaux are
//! filled cell by cell, GT patterns entry by entry, order maps are tested
//! against the full relation, and magic squares entry by entry. Every
//! enumeration runs under an [`OracleBudget`] and stops with
//! [`Error::BudgetExceeded`] instead of running away.

use std::time::{Duration, Instant};

use num_bigint::BigUint;

use crate::combinatorics::{SkewShape, WeightVector};
use crate::error::{Error, Result};
use crate::gt::{ForcedEqualityMask, GTChainSpec};
use crate::poset::Poset;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Search-tree nodes visited before giving up.
    pub max_nodes: u64,
    /// Wall-clock limit.
    pub max_time: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_nodes: 200_000_000,
            max_time: Duration::from_secs(60),
        }
    }
}

struct Meter {
    budget: OracleBudget,
    start: Instant,
    nodes: u64,
}

impl Meter {
    fn new(budget: OracleBudget) -> Self {
        Meter {
            budget,
            start: Instant::now(),
            nodes: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Error::BudgetExceeded(format!("more than {} nodes", self.budget.max_nodes)));
        }
        if self.nodes.is_multiple_of(4096) && self.start.elapsed() > self.budget.max_time {
            return Err(Error::BudgetExceeded(format!("more than {:?}", self.budget.max_time)));
        }
        Ok(())
    }
}

/// Semistandard tableaux of shape `λ/μ` with content `w`, filled cell by
/// cell in row-reading order.
pub fn enumerate_ssyt(shape: &SkewShape, w: &WeightVector, budget: OracleBudget) -> Result<BigUint> {
    let outer = shape.outer().parts();
    let cells: Vec<(usize, usize)> = (0..outer.len())
        .flat_map(|r| (shape.inner().part(r) as usize..outer[r] as usize).map(move |c| (r, c)))
        .collect();
    if cells.len() as u64 != w.total() {
        return Ok(BigUint::default());
    }
    let width = outer.first().copied().unwrap_or(0) as usize;
    let mut grid = vec![vec![0usize; width]; outer.len()];
    let mut left: Vec<u32> = w.entries().to_vec();
    let mut meter = Meter::new(budget);

    fn go(
        idx: usize,
        cells: &[(usize, usize)],
        shape: &SkewShape,
        grid: &mut [Vec<usize>],
        left: &mut [u32],
        meter: &mut Meter,
    ) -> Result<u64> {
        meter.tick()?;
        let Some(&(r, c)) = cells.get(idx) else { return Ok(1) };
        let mut total = 0;
        for v in 1..=left.len() {
            if left[v - 1] == 0 {
                continue;
            }
            // rows weakly increase, columns strictly increase; cells of μ
            // impose nothing
            let row_ok = c == 0 || c <= shape.inner().part(r) as usize || grid[r][c - 1] <= v;
            let col_ok = r == 0 || c < shape.inner().part(r - 1) as usize || grid[r - 1][c] < v;
            if row_ok && col_ok {
                grid[r][c] = v;
                left[v - 1] -= 1;
                total += go(idx + 1, cells, shape, grid, left, meter)?;
                left[v - 1] += 1;
            }
        }
        grid[r][c] = 0;
        Ok(total)
    }

    go(0, &cells, shape, &mut grid, &mut left, &mut meter).map(BigUint::from)
}

/// Integer GT patterns of the `n`-th dilate in which every inequality not
/// flagged tight by `mask` holds strictly, enumerated entry by entry.
pub fn enumerate_strict_patterns(
    spec: &GTChainSpec,
    mask: &ForcedEqualityMask,
    n: u32,
    budget: OracleBudget,
) -> Result<BigUint> {
    let ell = spec.rows();
    let k = spec.steps();
    let n64 = i64::from(n);
    let top: Vec<i64> = spec.shape().outer().parts().iter().map(|&p| i64::from(p) * n64).collect();
    let bottom: Vec<i64> = (0..ell).map(|j| i64::from(spec.shape().inner().part(j)) * n64).collect();
    let mut sums = vec![bottom.iter().sum::<i64>()];
    for &w in spec.weight().entries() {
        sums.push(sums.last().unwrap() + i64::from(w) * n64);
    }
    if *sums.last().unwrap() != top.iter().sum::<i64>() {
        return Ok(BigUint::default());
    }
    if k == 0 {
        return Ok(BigUint::from(u8::from(top == bottom)));
    }
    let mut rows = vec![bottom; k + 1];
    rows[k] = top.clone();
    let mut meter = Meter::new(budget);

    // entry (i, j) against the row below it
    let admissible = |rows: &[Vec<i64>], i: usize, j: usize, v: i64| -> bool {
        let below = &rows[i - 1];
        let gap = i64::from(!mask.lower_tight(i, j));
        if v < below[j] + gap {
            return false;
        }
        if j > 0 {
            let gap = i64::from(!mask.upper_tight(i, j));
            if v > below[j - 1] - gap {
                return false;
            }
        }
        true
    };

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        j: usize,
        k: usize,
        ell: usize,
        top: &[i64],
        sums: &[i64],
        rows: &mut Vec<Vec<i64>>,
        admissible: &dyn Fn(&[Vec<i64>], usize, usize, i64) -> bool,
        meter: &mut Meter,
    ) -> Result<u64> {
        meter.tick()?;
        if i == k {
            // the top row is fixed; check it against row k - 1
            return Ok(u64::from((0..ell).all(|j| admissible(rows, k, j, top[j]))));
        }
        if j == ell {
            if rows[i].iter().sum::<i64>() != sums[i] {
                return Ok(0);
            }
            return go(i + 1, 0, k, ell, top, sums, rows, admissible, meter);
        }
        let mut total = 0;
        for v in 0..=top[0] {
            if admissible(rows, i, j, v) {
                rows[i][j] = v;
                total += go(i, j + 1, k, ell, top, sums, rows, admissible, meter)?;
            }
        }
        Ok(total)
    }

    go(1, 0, k, ell, &top, &sums, &mut rows, &admissible, &mut meter).map(BigUint::from)
}

/// Maps `P -> {1..k}` with `a <_P b ⟹ f(a) <= f(b)` (or `<` when `strict`),
/// checked against every relation, not just covers.
pub fn enumerate_order_maps(poset: &Poset, k: u32, strict: bool, budget: OracleBudget) -> Result<BigUint> {
    let n = poset.len();
    let mut f = vec![0u32; n];
    let mut meter = Meter::new(budget);

    fn go(v: usize, poset: &Poset, k: u32, strict: bool, f: &mut [u32], meter: &mut Meter) -> Result<u64> {
        meter.tick()?;
        if v == poset.len() {
            return Ok(1);
        }
        let mut total = 0;
        for x in 1..=k {
            let ok = (0..v).all(|u| !poset.less(u, v) || if strict { f[u] < x } else { f[u] <= x });
            if ok {
                f[v] = x;
                total += go(v + 1, poset, k, strict, f, meter)?;
            }
        }
        Ok(total)
    }

    go(0, poset, k, strict, &mut f, &mut meter).map(BigUint::from)
}

/// All linear extensions, as words listing the elements in order,
/// lexicographically sorted.
pub fn enumerate_linear_extensions(poset: &Poset, budget: OracleBudget) -> Result<Vec<Vec<usize>>> {
    let n = poset.len();
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut meter = Meter::new(budget);

    fn go(
        poset: &Poset,
        word: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
        meter: &mut Meter,
    ) -> Result<()> {
        meter.tick()?;
        let n = poset.len();
        if word.len() == n {
            out.push(word.clone());
            return Ok(());
        }
        for v in 0..n {
            if !used[v] && (0..n).all(|u| !poset.less(u, v) || used[u]) {
                used[v] = true;
                word.push(v);
                go(poset, word, used, out, meter)?;
                word.pop();
                used[v] = false;
            }
        }
        Ok(())
    }

    go(poset, &mut word, &mut used, &mut out, &mut meter)?;
    Ok(out)
}

/// `ℓ×ℓ` integer matrices with all line sums `t`, entries `>= 0`, or `>= 1`
/// when `positive`.
pub fn enumerate_magic_squares(ell: usize, t: u32, positive: bool, budget: OracleBudget) -> Result<BigUint> {
    let mut col = vec![0u32; ell];
    let mut meter = Meter::new(budget);
    let min = u32::from(positive);

    #[allow(clippy::too_many_arguments)]
    fn go(
        r: usize,
        c: usize,
        row: u32,
        ell: usize,
        t: u32,
        min: u32,
        col: &mut [u32],
        meter: &mut Meter,
    ) -> Result<u64> {
        meter.tick()?;
        if r == ell {
            return Ok(u64::from(col.iter().all(|&s| s == t)));
        }
        if c == ell {
            return if row == t { go(r + 1, 0, 0, ell, t, min, col, meter) } else { Ok(0) };
        }
        let mut total = 0;
        for v in min..=t {
            if row + v > t || col[c] + v > t {
                break;
            }
            col[c] += v;
            total += go(r, c + 1, row + v, ell, t, min, col, meter)?;
            col[c] -= v;
        }
        Ok(total)
    }

    go(0, 0, 0, ell, t, min, &mut col, &mut meter).map(BigUint::from)
}
