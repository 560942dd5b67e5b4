//! Frontier DP for `Ω(P, k)` and `Ω̄(P, m)`.
//!
//! Non-maximal vertices are assigned values one at a time, in label order or
//! along another linear extension that keeps fewer vertices live. A vertex stays
//! in the state key while some upper cover is still unassigned. A maximal
//! vertex never enters the key: it is counted as a multiplier at the step of
//! its last lower cover, when all of its constraints are known.

use num_bigint::BigUint;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use std::hash::Hash;

use super::Poset;
use crate::count::{with_fallback, Overflow, Tally};
use crate::error::{Error, Result};

/// Values of the live vertices.
trait Key: Clone + Eq + Hash {
    fn empty() -> Self;
    fn get(&self, i: usize) -> u16;
    fn set(&mut self, i: usize, x: u16);
    fn project(&self, keep: &[usize]) -> Self;
}

impl Key for SmallVec<[u16; 12]> {
    fn empty() -> Self {
        SmallVec::new()
    }
    fn get(&self, i: usize) -> u16 {
        self[i]
    }
    fn set(&mut self, i: usize, x: u16) {
        if i == self.len() {
            self.push(x);
        } else {
            self[i] = x;
        }
    }
    fn project(&self, keep: &[usize]) -> Self {
        keep.iter().map(|&p| self[p]).collect()
    }
}

/// Up to sixteen byte-sized values packed in one word.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Packed(u128);

impl Key for Packed {
    fn empty() -> Self {
        Packed(0)
    }
    fn get(&self, i: usize) -> u16 {
        (self.0 >> (8 * i) & 0xff) as u16
    }
    fn set(&mut self, i: usize, x: u16) {
        self.0 = self.0 & !(0xff << (8 * i)) | u128::from(x) << (8 * i);
    }
    fn project(&self, keep: &[usize]) -> Self {
        let mut out = 0;
        for (j, &p) in keep.iter().enumerate() {
            out |= (self.0 >> (8 * p) & 0xff) << (8 * j);
        }
        Packed(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Step {
    /// Size of the incoming key.
    width_in: usize,
    /// Positions of the vertex's lower covers in the incoming key.
    lower: Vec<usize>,
    /// For each maximal vertex absorbed here, positions of its lower covers
    /// in the key extended by the new value.
    absorbed: Vec<Vec<usize>>,
    /// Positions of the extended key kept for the next step.
    keep: Vec<usize>,
    /// Number of elements in a longest chain strictly above the vertex; a
    /// strict map leaves at least that many values above it.
    above: u16,
}

/// Processing schedule for a poset; reusable across all `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierPlan {
    n: usize,
    steps: Vec<Step>,
    width: usize,
    isolated: u32,
}

impl FrontierPlan {
    /// Builds the label-order plan and a greedy plan that always processes
    /// the available vertex leaving the fewest live vertices, and keeps the
    /// one with the smaller estimated cost.
    pub fn new(poset: &Poset) -> Self {
        let label = Self::label_order(poset);
        if poset.len() > 256 {
            return label;
        }
        let greedy = Self::with_order(poset, &greedy_order(poset)).expect("greedy order is a linear extension");
        if greedy.cost_estimate() < label.cost_estimate() {
            greedy
        } else {
            label
        }
    }

    /// Processes vertices strictly in label order.
    pub fn label_order(poset: &Poset) -> Self {
        let order: Vec<usize> = (0..poset.len()).filter(|&v| !poset.upper_covers(v).is_empty()).collect();
        Self::with_order(poset, &order).expect("label order is a linear extension")
    }

    /// Plan for the given processing order of the non-maximal vertices,
    /// which must list each of them once with lower covers first.
    pub fn with_order(poset: &Poset, order: &[usize]) -> Result<Self> {
        let n = poset.len();
        let maximal: Vec<bool> = (0..n).map(|v| poset.upper_covers(v).is_empty()).collect();
        let mut rank = vec![usize::MAX; n];
        for (s, &v) in order.iter().enumerate() {
            if v >= n || maximal[v] || rank[v] != usize::MAX {
                return Err(Error::InvalidPoset(format!("vertex {v} cannot be scheduled at step {s}")));
            }
            if poset.lower_covers(v).iter().any(|&u| rank[u] == usize::MAX) {
                return Err(Error::InvalidPoset(format!("vertex {v} scheduled before a lower cover")));
            }
            rank[v] = s;
        }
        if order.len() != maximal.iter().filter(|&&m| !m).count() {
            return Err(Error::InvalidPoset("processing order misses a vertex".into()));
        }
        let mut absorb_at: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut finish = rank.clone();
        let mut isolated = 0;
        for v in 0..n {
            if !maximal[v] {
                continue;
            }
            match poset.lower_covers(v).iter().max_by_key(|&&u| rank[u]) {
                Some(&a) => {
                    absorb_at[a].push(v);
                    finish[v] = rank[a];
                }
                None => isolated += 1,
            }
        }
        let done: Vec<usize> = (0..n)
            .map(|u| poset.upper_covers(u).iter().map(|&c| finish[c]).max().unwrap_or(0))
            .collect();

        let mut above = vec![0u16; n];
        for v in (0..n).rev() {
            above[v] = poset.upper_covers(v).iter().map(|&c| above[c] + 1).max().unwrap_or(0);
        }

        let mut steps = Vec::new();
        let mut live: Vec<usize> = Vec::new();
        let mut width = 0;
        let position = |list: &[usize], u: usize| list.iter().position(|&x| x == u).expect("lower cover is live");
        for (s, &v) in order.iter().enumerate() {
            let width_in = live.len();
            let lower = poset.lower_covers(v).iter().map(|&u| position(&live, u)).collect();
            let mut ext = live.clone();
            ext.push(v);
            let absorbed = absorb_at[v]
                .iter()
                .map(|&m| poset.lower_covers(m).iter().map(|&u| position(&ext, u)).collect())
                .collect();
            let keep: Vec<usize> = (0..ext.len()).filter(|&i| done[ext[i]] > s).collect();
            live = keep.iter().map(|&i| ext[i]).collect();
            width = width.max(live.len());
            steps.push(Step {
                width_in,
                lower,
                absorbed,
                keep,
                above: above[v],
            });
        }
        Ok(FrontierPlan {
            n,
            steps,
            width,
            isolated,
        })
    }

    /// Rough number of transitions at a moderate dilation.
    fn cost_estimate(&self) -> f64 {
        self.steps.iter().map(|s| 8f64.powi(s.width_in as i32 + 1)).sum()
    }
    /// Number of poset elements.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Maximum number of vertices held in the state key at once.
    pub fn width(&self) -> usize {
        self.width
    }

    /// `Ω(P, k)` (weak) or `Ω̄(P, k)` (strict) with values in `{1..k}`.
    pub fn count(&self, k: u64, strict: bool) -> Result<BigUint> {
        let k = u16::try_from(k)
            .map_err(|_| Error::ResourceGuard(format!("order polynomial argument {k} exceeds {}", u16::MAX)))?;
        if k <= 0xff && self.width < 16 {
            Ok(with_fallback(
                || self.run::<Packed, u128>(k, strict),
                || self.run::<Packed, BigUint>(k, strict),
            ))
        } else {
            type Wide = SmallVec<[u16; 12]>;
            Ok(with_fallback(
                || self.run::<Wide, u128>(k, strict),
                || self.run::<Wide, BigUint>(k, strict),
            ))
        }
    }

    fn run<K: Key, T: Tally>(&self, k: u16, strict: bool) -> std::result::Result<T, Overflow> {
        let mut states: FxHashMap<K, T> = FxHashMap::default();
        states.insert(K::empty(), T::unit());
        for step in &self.steps {
            let mut next: FxHashMap<K, T> = FxHashMap::default();
            let last = step.width_in;
            for (key, count) in states {
                let lo = match step.lower.iter().map(|&p| key.get(p)).max() {
                    None => 1,
                    Some(b) if strict => b + 1,
                    Some(b) => b,
                };
                let hi = if strict { k.saturating_sub(step.above) } else { k };
                let mut ext = key;
                'value: for x in lo..=hi {
                    ext.set(last, x);
                    let mut c = count.clone();
                    for lows in &step.absorbed {
                        let top = lows.iter().map(|&p| ext.get(p)).max().expect("absorbed vertex has a lower cover");
                        let mult = if strict { k - top } else { k - top + 1 };
                        if mult == 0 {
                            continue 'value;
                        }
                        if !c.scale_by(u64::from(mult)) {
                            return Err(Overflow);
                        }
                    }
                    let nk = ext.project(&step.keep);
                    match next.get_mut(&nk) {
                        Some(slot) => {
                            if !slot.accumulate(&c) {
                                return Err(Overflow);
                            }
                        }
                        None => {
                            next.insert(nk, c);
                        }
                    }
                }
            }
            states = next;
        }
        let mut total = T::empty();
        for c in states.values() {
            if !total.accumulate(c) {
                return Err(Overflow);
            }
        }
        for _ in 0..self.isolated {
            if !total.scale_by(u64::from(k)) {
                return Err(Overflow);
            }
        }
        Ok(total)
    }
}

/// Greedy processing order: among the vertices whose lower covers are all
/// processed, take the one after which the fewest vertices stay live
/// (ties to the smaller label).
fn greedy_order(poset: &Poset) -> Vec<usize> {
    let n = poset.len();
    let maximal: Vec<bool> = (0..n).map(|v| poset.upper_covers(v).is_empty()).collect();
    let mut processed = vec![false; n];
    let mut pending: Vec<usize> = (0..n).map(|v| poset.lower_covers(v).len()).collect();
    let mut live: Vec<usize> = Vec::new();
    let mut order = Vec::new();
    // a maximal vertex is finished once all its lower covers are processed;
    // any other vertex once it is processed itself
    let finished = |c: usize, processed: &[bool], extra: usize| {
        if maximal[c] {
            poset.lower_covers(c).iter().all(|&u| processed[u] || u == extra)
        } else {
            processed[c] || c == extra
        }
    };
    let still_live = |u: usize, processed: &[bool], extra: usize| {
        poset.upper_covers(u).iter().any(|&c| !finished(c, processed, extra))
    };
    while order.len() < maximal.iter().filter(|&&m| !m).count() {
        let mut best: Option<(usize, usize)> = None;
        for v in (0..n).filter(|&v| !maximal[v] && !processed[v] && pending[v] == 0) {
            let after = live
                .iter()
                .chain(std::iter::once(&v))
                .filter(|&&u| still_live(u, &processed, v))
                .count();
            if best.is_none_or(|(b, _)| after < b) {
                best = Some((after, v));
            }
        }
        let (_, v) = best.expect("some vertex is available");
        processed[v] = true;
        for &c in poset.upper_covers(v) {
            pending[c] -= 1;
        }
        live.push(v);
        live.retain(|&u| still_live(u, &processed, usize::MAX));
        order.push(v);
    }
    order
}

/// `Ω(P, k)`: order-preserving maps `P -> {1..k}`.
pub fn order_polynomial(poset: &Poset, k: u64) -> Result<BigUint> {
    FrontierPlan::new(poset).count(k, false)
}

/// `Ω̄(P, m)`: strictly order-preserving maps `P -> {1..m}`.
pub fn strict_order_polynomial(poset: &Poset, m: u64) -> Result<BigUint> {
    FrontierPlan::new(poset).count(m, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{Partition, Permutation};
    use proptest::prelude::*;

    fn brute(p: &Poset, k: u16, strict: bool) -> u64 {
        fn go(p: &Poset, k: u16, strict: bool, f: &mut Vec<u16>) -> u64 {
            let v = f.len();
            if v == p.len() {
                return 1;
            }
            let mut total = 0;
            for x in 1..=k {
                let ok = p.lower_covers(v).iter().all(|&u| if strict { f[u] < x } else { f[u] <= x });
                if ok {
                    f.push(x);
                    total += go(p, k, strict, f);
                    f.pop();
                }
            }
            total
        }
        go(p, k, strict, &mut Vec::new())
    }

    fn omega(p: &Poset, k: u64) -> u64 {
        order_polynomial(p, k).unwrap().try_into().unwrap()
    }

    fn strict(p: &Poset, k: u64) -> u64 {
        strict_order_polynomial(p, k).unwrap().try_into().unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(omega(&Poset::chain(3), 2), 4);
        assert_eq!(omega(&Poset::antichain(3), 2), 8);
        assert_eq!(strict(&Poset::chain(3), 3), 1);
        assert_eq!(strict(&Poset::chain(3), 2), 0);
        assert_eq!(strict(&Poset::antichain(4), 3), 81);
        assert_eq!(omega(&Poset::chain(4), 0), 0);
        assert_eq!(omega(&Poset::antichain(0), 0), 1);
        assert_eq!(omega(&Poset::fence(8), 3), brute(&Poset::fence(8), 3, false));
    }

    #[test]
    fn widths() {
        // two-element chains are absorbed at once and never held
        assert_eq!(FrontierPlan::new(&Poset::chain(2)).width(), 0);
        for n in 3..12 {
            assert_eq!(FrontierPlan::new(&Poset::chain(n)).width(), 1, "chain {n}");
            assert_eq!(FrontierPlan::new(&Poset::fence(n)).width(), 1, "fence {n}");
        }
        for n in 1..12 {
            assert_eq!(FrontierPlan::new(&Poset::antichain(n)).width(), 0);
        }
        for shape in ["4,3,2,1", "5,5,5", "3,1", "6"] {
            let lam: Partition = shape.parse().unwrap();
            let w = FrontierPlan::new(&Poset::shape_poset(&lam).unwrap()).width();
            assert!(w <= lam.part(0) as usize, "{shape}: {w}");
        }
    }

    #[test]
    fn chain_binomials_and_overflow_fallback() {
        // Ω(chain n, k) = C(n + k - 1, n); large enough to leave u128
        let n = 60;
        let k = 200u64;
        let mut c = BigUint::from(1u8);
        for i in 0..n as u64 {
            c = c * (k + i) / (i + 1);
        }
        assert_eq!(order_polynomial(&Poset::chain(n), k).unwrap(), c);
        assert_eq!(
            order_polynomial(&Poset::antichain(30), 40).unwrap(),
            BigUint::from(40u8).pow(30)
        );
        assert!(order_polynomial(&Poset::chain(2), 70_000).is_err());
    }

    fn arb_poset(max_n: usize) -> impl Strategy<Value = Poset> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut rel = Vec::new();
                let mut it = bits.into_iter();
                for b in 0..n {
                    for a in 0..b {
                        // sparse relations keep the posets interesting
                        if it.next().unwrap() && (a + b) % 3 != 0 {
                            rel.push((a, b));
                        }
                    }
                }
                Poset::from_relations(n, &rel).unwrap()
            })
        })
    }

    #[test]
    fn orders_are_validated() {
        let p = Poset::chain(4);
        assert!(FrontierPlan::with_order(&p, &[0, 1, 2]).is_ok());
        assert!(FrontierPlan::with_order(&p, &[1, 0, 2]).is_err());
        assert!(FrontierPlan::with_order(&p, &[0, 1]).is_err());
        assert!(FrontierPlan::with_order(&p, &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn greedy_order_narrows_stembridge_poset() {
        let w: Permutation = "2,4,6,8,10,1,12,3,15,5,17,7,9,11,13,14,16".parse().unwrap();
        let p = Poset::permutation_poset(&w);
        let label = FrontierPlan::label_order(&p);
        let best = FrontierPlan::new(&p);
        assert!(best.width() <= label.width());
        for k in [1, 4, 7] {
            assert_eq!(best.count(k, false).unwrap(), label.count(k, false).unwrap());
            assert_eq!(best.count(k + 5, true).unwrap(), label.count(k + 5, true).unwrap());
        }
    }

    proptest! {
        #[test]
        fn frontier_matches_backtracking(p in arb_poset(8), k in 0u16..=5) {
            prop_assert_eq!(omega(&p, k.into()), brute(&p, k, false));
            prop_assert_eq!(strict(&p, k.into()), brute(&p, k, true));
        }

        #[test]
        fn weakly_increasing_and_strict_vanishes_below_height(p in arb_poset(7)) {
            for k in 0..6 {
                prop_assert!(omega(&p, k) <= omega(&p, k + 1));
            }
            for m in 0..p.height() as u64 {
                prop_assert_eq!(strict(&p, m), 0);
            }
        }

        #[test]
        fn permutation_posets_match(v in Just((1..=7i64).collect::<Vec<_>>()).prop_shuffle(), k in 1u16..=4) {
            let p = Poset::permutation_poset(&Permutation::new(&v).unwrap());
            prop_assert_eq!(omega(&p, k.into()), brute(&p, k, false));
            prop_assert_eq!(strict(&p, k.into()), brute(&p, k, true));
        }
    }
}
