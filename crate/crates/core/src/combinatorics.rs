//! Partitions, skew shapes, weight vectors and permutations.
//!
//! Every value here is canonical once constructed: partitions carry no
//! trailing zeros, weights keep their entries as given, and permutations are
//! validated bijections on `1..=n` in one-line notation.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer partition stored without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Validates a sequence of parts and strips trailing zeros.
    ///
    /// Input is never sorted: `(2,3,1)` is rejected rather than reordered.
    pub fn canonicalize(parts: &[i64]) -> Result<Self> {
        if parts.iter().any(|&p| p < 0) {
            return Err(Error::NotAPartition(parts.to_vec()));
        }
        let end = parts.iter().rposition(|&p| p != 0).map_or(0, |i| i + 1);
        let trimmed = &parts[..end];
        if trimmed.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotAPartition(parts.to_vec()));
        }
        let parts = trimmed
            .iter()
            .map(|&p| u32::try_from(p).map_err(|_| Error::Parse(format!("part {p} too large"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.0.iter().map(|&p| u64::from(p)).sum()
    }

    /// Part `j` (0-based), zero beyond the length.
    pub fn part(&self, j: usize) -> u32 {
        self.0.get(j).copied().unwrap_or(0)
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    pub fn scaled(&self, n: u32) -> Partition {
        Partition(self.0.iter().map(|&p| p * n).collect())
    }

    /// All partitions of `n`, in reverse lexicographic order (`(n)` first).
    pub fn all_of(n: u32) -> Vec<Partition> {
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions contained in `self` (including the empty one and `self`).
    pub fn subpartitions(&self) -> Vec<Partition> {
        fn rec(outer: &[u32], j: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if j == outer.len() || max == 0 {
                let mut p = cur.clone();
                while p.last() == Some(&0) {
                    p.pop();
                }
                out.push(Partition(p));
                return;
            }
            for v in 0..=outer[j].min(max) {
                cur.push(v);
                rec(outer, j + 1, v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(&self.0, 0, u32::MAX, &mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }
}

impl TryFrom<Vec<i64>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<i64>) -> Result<Self> {
        Partition::canonicalize(&parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.0))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::canonicalize(&parse_int_list(s)?)
    }
}

/// `true` iff `beta / alpha` is a horizontal strip: `alpha ⊆ beta` and
/// `beta[j+1] <= alpha[j]` for every row.
pub fn is_horizontal_strip(alpha: &Partition, beta: &Partition) -> bool {
    beta.contains(alpha) && (0..beta.len()).all(|j| beta.part(j + 1) <= alpha.part(j))
}

/// A skew shape `outer / inner` with `inner ⊆ outer`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::InvalidShape {
                outer: outer.0,
                inner: inner.0,
            });
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn straight(outer: Partition) -> Self {
        SkewShape {
            outer,
            inner: Partition::empty(),
        }
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn size(&self) -> u64 {
        self.outer.size() - self.inner.size()
    }

    pub fn scaled(&self, n: u32) -> SkewShape {
        SkewShape {
            outer: self.outer.scaled(n),
            inner: self.inner.scaled(n),
        }
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.is_empty() {
            write!(f, "{}", self.outer)
        } else {
            write!(f, "{}/{}", self.outer, self.inner)
        }
    }
}

/// Content vector of a tableau.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u32>")]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(weights: &[i64]) -> Result<Self> {
        weights
            .iter()
            .map(|&w| {
                u32::try_from(w).map_err(|_| Error::Parse(format!("weight entry {w} is not a nonnegative integer")))
            })
            .collect::<Result<Vec<_>>>()
            .map(WeightVector)
    }

    pub fn from_parts(weights: Vec<u32>) -> Self {
        WeightVector(weights)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&w| u64::from(w)).sum()
    }

    pub fn without_zeros(&self) -> WeightVector {
        WeightVector(self.0.iter().copied().filter(|&w| w != 0).collect())
    }

    pub fn scaled(&self, n: u32) -> WeightVector {
        WeightVector(self.0.iter().map(|&w| w * n).collect())
    }

    /// All compositions of `n` (positive parts), used for exhaustive sweeps.
    pub fn compositions(n: u32) -> Vec<WeightVector> {
        fn rec(rem: u32, cur: &mut Vec<u32>, out: &mut Vec<WeightVector>) {
            if rem == 0 {
                out.push(WeightVector(cur.clone()));
                return;
            }
            for p in 1..=rem {
                cur.push(p);
                rec(rem - p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<i64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        WeightVector::new(&v)
    }
}

impl From<WeightVector> for Vec<u32> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.0))
    }
}

impl FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WeightVector::new(&parse_int_list(s)?)
    }
}

/// A permutation of `1..=n` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u32>")]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(values: &[i64]) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in values {
            if v < 1 || v as usize > n || seen[v as usize] {
                return Err(Error::NotAPermutation {
                    n,
                    values: values.to_vec(),
                });
            }
            seen[v as usize] = true;
        }
        Ok(Permutation(values.iter().map(|&v| v as u32).collect()))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn swapped(&self, a: usize, b: usize) -> Permutation {
        let mut v = self.0.clone();
        v.swap(a, b);
        Permutation(v)
    }

    /// `true` iff some subsequence of `self` is order-isomorphic to `pattern`.
    pub fn contains_pattern(&self, pattern: &Permutation) -> bool {
        contains_pattern(self, pattern)
    }
}

impl TryFrom<Vec<i64>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        Permutation::new(&v)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.0))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::new(&parse_int_list(s)?)
    }
}

/// Pattern containment by backtracking over increasing index sets; a partial
/// choice is extended only while it stays order-isomorphic to the pattern's
/// prefix.
pub fn contains_pattern(w: &Permutation, pattern: &Permutation) -> bool {
    fn extend(w: &[u32], pat: &[u32], start: usize, chosen: &mut Vec<u32>) -> bool {
        let m = chosen.len();
        if m == pat.len() {
            return true;
        }
        // not enough positions left
        if w.len() - start < pat.len() - m {
            return false;
        }
        for i in start..w.len() {
            let v = w[i];
            let ok = chosen
                .iter()
                .zip(pat)
                .all(|(&c, &p)| (v < c) == (pat[m] < p));
            if ok {
                chosen.push(v);
                if extend(w, pat, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if pattern.len() > w.len() {
        return false;
    }
    extend(&w.0, &pattern.0, 0, &mut Vec::with_capacity(pattern.len()))
}

/// Every permutation reachable from `w` by at most `radius` transpositions of
/// two positions, `w` included.
pub fn transposition_neighborhood(w: &Permutation, radius: usize) -> BTreeSet<Permutation> {
    let n = w.len();
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(w.clone());
    let mut frontier = vec![w.clone()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for p in &frontier {
            for a in 0..n {
                for b in a + 1..n {
                    let q = p.swapped(a, b);
                    if !seen.contains(&q) {
                        seen.insert(q.clone());
                        next.push(q);
                    }
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

/// Parses a comma-separated list of integers. A term `a^b` stands for `b`
/// copies of `a`, so `"2,1^8"` is a 2 followed by eight 1s. Surrounding
/// parentheses and whitespace are ignored; the empty string is the empty list.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    let s = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(s)
        .trim();
    let mut out = Vec::new();
    if s.is_empty() {
        return Ok(out);
    }
    for term in s.split(',') {
        let term = term.trim();
        let bad = || Error::Parse(format!("bad list entry {term:?} in {s:?}"));
        match term.split_once('^') {
            Some((base, reps)) => {
                let base: i64 = base.trim().parse().map_err(|_| bad())?;
                let reps = reps.trim().trim_start_matches('(').trim_end_matches(')');
                let reps: usize = reps.trim().parse().map_err(|_| bad())?;
                out.extend(std::iter::repeat_n(base, reps));
            }
            None => out.push(term.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}
