//! Finite naturally labeled posets and their order polytopes.
//!
//! Lattice points of the `t`-th dilate of the order polytope `O(P)` are
//! weakly order-preserving maps `P -> {0..t}`, so `L(t) = Ω(P, t+1)`; the
//! interior points are strictly order-preserving maps into `{1..t-1}`.

mod frontier;
mod linext;
mod search;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{Partition, Permutation};
use crate::ehrhart::{self, EhrhartComputation, PointEvaluator};
use crate::error::{Error, Result};

pub use frontier::{order_polynomial, strict_order_polynomial, FrontierPlan};
pub use linext::{count_linear_extensions, hstar_via_linext, hstar_via_linext_with, LinextProgress};
pub use search::{permutation_hstar, search_nonrealrooted, search_nonrealrooted_until, SearchHit, SearchOutcome};

/// A poset on `{0..n-1}` given by its cover relations. Every relation
/// `a <_P b` satisfies `a < b` as integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    /// `below[b]` has bit `a` set iff `a <_P b`.
    below: Vec<Vec<u64>>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

impl Poset {
    /// Validates cover input: indices in range, natural labeling (`a < b`
    /// for every cover `(a, b)`), no duplicates, and no cover implied by
    /// the others.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut sorted = covers.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidPoset(format!("duplicate cover {:?}", w[0])));
            }
        }
        for &(a, b) in &sorted {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("cover ({a}, {b}) out of range for n = {n}")));
            }
            if a >= b {
                return Err(Error::InvalidPoset(format!(
                    "cover ({a}, {b}) violates natural labeling"
                )));
            }
        }
        let poset = Self::build(n, sorted);
        for &(a, b) in &poset.covers {
            // (a, b) is redundant if a lies below some other lower cover of b
            if poset.lower[b].iter().any(|&c| c != a && bit(&poset.below[c], a)) {
                return Err(Error::InvalidPoset(format!("cover ({a}, {b}) is implied by transitivity")));
            }
        }
        Ok(poset)
    }

    /// Builds a poset from an arbitrary set of relations `a < b` (which must
    /// respect the labeling), keeping only the covers.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        for &(a, b) in relations {
            if a >= n || b >= n || a >= b {
                return Err(Error::InvalidPoset(format!("relation ({a}, {b}) invalid for natural labeling")));
            }
        }
        let full = Self::build(n, relations.to_vec());
        let mut covers = Vec::new();
        for b in 0..n {
            let below_b = &full.below[b];
            for a in 0..b {
                if !bit(below_b, a) {
                    continue;
                }
                // a ⋖ b unless some c strictly between
                let between = (a + 1..b).any(|c| bit(&full.below[c], a) && bit(below_b, c));
                if !between {
                    covers.push((a, b));
                }
            }
        }
        Ok(Self::build(n, covers))
    }

    fn build(n: usize, mut covers: Vec<(usize, usize)>) -> Self {
        covers.sort_unstable();
        covers.dedup();
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for &(a, b) in &covers {
            lower[b].push(a);
            upper[a].push(b);
        }
        let w = words(n);
        let mut below = vec![vec![0u64; w]; n];
        // natural labeling: lower covers are processed first
        for b in 0..n {
            let mut set = vec![0u64; w];
            for &a in &lower[b] {
                set[a / 64] |= 1 << (a % 64);
                for (s, t) in set.iter_mut().zip(&below[a]) {
                    *s |= t;
                }
            }
            below[b] = set;
        }
        Poset {
            n,
            covers,
            lower,
            upper,
            below,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_covers(&self, v: usize) -> &[usize] {
        &self.lower[v]
    }

    pub fn upper_covers(&self, v: usize) -> &[usize] {
        &self.upper[v]
    }

    /// `a <_P b` (strict).
    pub fn less(&self, a: usize, b: usize) -> bool {
        bit(&self.below[b], a)
    }

    /// Number of elements in a longest chain.
    pub fn height(&self) -> usize {
        let mut h = vec![1usize; self.n];
        for b in 0..self.n {
            for &a in &self.lower[b] {
                h[b] = h[b].max(h[a] + 1);
            }
        }
        h.into_iter().max().unwrap_or(0)
    }

    pub fn chain(n: usize) -> Self {
        Self::build(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn antichain(n: usize) -> Self {
        Self::build(n, Vec::new())
    }

    /// The zigzag `x0 < x1 > x2 < x3 > …` on `n` elements, labeled naturally
    /// so that each maximal element directly follows its last lower cover:
    /// `x0, x2, x1, x4, x3, …`.
    pub fn fence(n: usize) -> Self {
        let mut order = Vec::with_capacity(n);
        if n > 0 {
            order.push(0);
        }
        let mut p = 2;
        while p < n {
            order.push(p);
            order.push(p - 1);
            p += 2;
        }
        if n >= 2 && n.is_multiple_of(2) {
            order.push(n - 1);
        }
        let mut label = vec![0; n];
        for (l, &x) in order.iter().enumerate() {
            label[x] = l;
        }
        let covers = (1..n)
            .map(|p| {
                let (a, b) = if p % 2 == 1 { (p - 1, p) } else { (p, p - 1) };
                (label[a], label[b])
            })
            .collect();
        Self::build(n, covers)
    }

    /// Cells of the Young diagram of `shape`, ordered componentwise and
    /// labeled in row-reading order.
    pub fn shape_poset(shape: &Partition) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::InvalidPoset("shape poset of the empty partition".into()));
        }
        let parts = shape.parts();
        let mut offset = vec![0usize; parts.len() + 1];
        for (r, &p) in parts.iter().enumerate() {
            offset[r + 1] = offset[r] + p as usize;
        }
        let mut covers = Vec::new();
        for (r, &p) in parts.iter().enumerate() {
            for c in 0..p as usize {
                let id = offset[r] + c;
                if c + 1 < p as usize {
                    covers.push((id, id + 1));
                }
                if r + 1 < parts.len() && c < parts[r + 1] as usize {
                    covers.push((id, offset[r + 1] + c));
                }
            }
        }
        Ok(Self::build(offset[parts.len()], covers))
    }

    /// `i <_P j` iff `i < j` and `w_i < w_j` (positions relabeled from 0).
    pub fn permutation_poset(w: &Permutation) -> Self {
        let v = w.values();
        let mut rel = Vec::new();
        for j in 0..v.len() {
            for i in 0..j {
                if v[i] < v[j] {
                    rel.push((i, j));
                }
            }
        }
        Self::from_relations(v.len(), &rel).expect("permutation posets are naturally labeled")
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            n: self.n,
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(j: &PosetJson) -> Result<Self> {
        let covers: Vec<(usize, usize)> = j.covers.iter().map(|c| (c[0], c[1])).collect();
        Self::from_covers(j.n, &covers)
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "poset on {} elements with {} covers", self.n, self.covers.len())
    }
}

/// Serialized form `{"n": .., "covers": [[a, b], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
}

/// Lattice-point oracle for dilates of `O(P)`.
#[derive(Clone, Debug)]
pub struct OrderPolytopeEvaluator {
    plan: FrontierPlan,
}

impl OrderPolytopeEvaluator {
    pub fn new(poset: &Poset) -> Self {
        OrderPolytopeEvaluator {
            plan: FrontierPlan::new(poset),
        }
    }

    pub fn plan(&self) -> &FrontierPlan {
        &self.plan
    }
}

impl PointEvaluator for OrderPolytopeEvaluator {
    fn dimension(&self) -> usize {
        self.plan.len()
    }

    /// `L(t) = Ω(P, t + 1)`.
    fn positive(&self, t: u64) -> Result<BigUint> {
        self.plan.count(t + 1, false)
    }

    /// `L*(t) = Ω̄(P, t - 1)`.
    fn interior(&self, t: u64) -> Result<BigUint> {
        self.plan.count(t.saturating_sub(1), true)
    }
}

/// Ehrhart polynomial of the order polytope (degree `n`), computed by the
/// adaptive reciprocity schedule and verified at two fresh dilations.
pub fn order_polytope_ehrhart(poset: &Poset) -> Result<EhrhartComputation> {
    let ev = OrderPolytopeEvaluator::new(poset);
    ehrhart::verified_ehrhart(&ev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!(Poset::chain(3).covers(), &[(0, 1), (1, 2)]);
        assert!(Poset::antichain(3).covers().is_empty());
        let p = Poset::permutation_poset(&Permutation::new(&[2, 1]).unwrap());
        assert_eq!(p, Poset::antichain(2));
        let f = Poset::fence(5);
        assert_eq!(f.covers().len(), 4);
        assert!(f.covers().iter().all(|&(a, b)| a < b));
        assert_eq!(f.height(), 2);
        let s = Poset::shape_poset(&"2,1".parse().unwrap()).unwrap();
        assert_eq!(s.covers(), &[(0, 1), (0, 2)]);
        assert!(Poset::shape_poset(&Partition::empty()).is_err());
    }

    #[test]
    fn every_family_validates() {
        let posets = [
            Poset::chain(6),
            Poset::antichain(4),
            Poset::fence(9),
            Poset::fence(10),
            Poset::shape_poset(&"4,3,2,1".parse().unwrap()).unwrap(),
            Poset::permutation_poset(&"2,4,6,8,10,1,12,3,15,5,17,7,9,11,13,14,16".parse().unwrap()),
        ];
        for p in &posets {
            let covers = p.covers().to_vec();
            assert_eq!(&Poset::from_covers(p.len(), &covers).unwrap(), p);
            assert_eq!(&Poset::from_json(&p.to_json()).unwrap(), p);
        }
    }

    #[test]
    fn cover_validation() {
        assert!(Poset::from_covers(3, &[(1, 0)]).is_err());
        assert!(Poset::from_covers(3, &[(0, 3)]).is_err());
        assert!(Poset::from_covers(3, &[(0, 1), (1, 2), (0, 2)]).is_err());
        assert!(Poset::from_covers(3, &[(0, 1), (0, 1)]).is_err());
        let p = Poset::from_relations(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p, Poset::chain(3));
        assert!(p.less(0, 2) && !p.less(2, 0));
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&Poset::chain(3).to_json()).unwrap();
        assert_eq!(j, r#"{"n":3,"covers":[[0,1],[1,2]]}"#);
    }
}
