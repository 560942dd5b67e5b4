//! Search for permutation posets whose h*-polynomial is not real-rooted.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{order_polytope_ehrhart, Poset};
use crate::combinatorics::{transposition_neighborhood, Permutation};
use crate::error::{Error, Result};
use crate::hstar::{hstar_from_ehrhart, HStarVector, PropertyFlags};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub permutation: Permutation,
    pub hstar: HStarVector,
    pub flags: PropertyFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Permutations in the neighborhood that avoid the pattern.
    pub candidates: usize,
    /// Non-real-rooted finds, sorted lexicographically.
    pub hits: Vec<SearchHit>,
}

/// h*-vector and flags of the order polytope of `P_w`.
pub fn permutation_hstar(w: &Permutation) -> Result<(HStarVector, PropertyFlags)> {
    let comp = order_polytope_ehrhart(&Poset::permutation_poset(w))?;
    let h = hstar_from_ehrhart(&comp.polynomial)?;
    let flags = PropertyFlags::compute(&comp.polynomial, &h)?;
    Ok((h, flags))
}

/// Every permutation within `radius` transpositions of `w0` that avoids
/// `avoid` is tested; the ones with non-real-rooted h* are returned.
pub fn search_nonrealrooted(w0: &Permutation, radius: usize, avoid: &Permutation) -> Result<SearchOutcome> {
    search_nonrealrooted_until(w0, radius, avoid, None)
}

/// As [`search_nonrealrooted`], giving up with [`Error::BudgetExceeded`]
/// once `deadline` has passed.
pub fn search_nonrealrooted_until(
    w0: &Permutation,
    radius: usize,
    avoid: &Permutation,
    deadline: Option<Instant>,
) -> Result<SearchOutcome> {
    let candidates: Vec<Permutation> = transposition_neighborhood(w0, radius)
        .into_iter()
        .filter(|w| !w.contains_pattern(avoid))
        .collect();
    let found: Vec<Option<SearchHit>> = candidates
        .par_iter()
        .map(|w| {
            if deadline.is_some_and(|d| Instant::now() > d) {
                return Err(Error::BudgetExceeded(format!("search around {w0} ran past its deadline")));
            }
            let (hstar, flags) = permutation_hstar(w)?;
            Ok((!flags.real_rooted).then(|| SearchHit {
                permutation: w.clone(),
                hstar,
                flags,
            }))
        })
        .collect::<Result<_>>()?;
    // the neighborhood is a BTreeSet, so hits are already in lexicographic order
    Ok(SearchOutcome {
        candidates: candidates.len(),
        hits: found.into_iter().flatten().collect(),
    })
}
