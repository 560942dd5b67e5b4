//! Exact Ehrhart polynomials and h*-vectors of Gelfand–Tsetlin, order and
//! Birkhoff polytopes.
//!
//! Lattice-point counts of a dilate `nP` come from dynamic programs
//! (horizontal strips for GT polytopes, a frontier DP for order polytopes,
//! column-sum states for magic squares). Ehrhart–Macdonald reciprocity,
//! `(-1)^d L_P(-n) = #(relint(nP) ∩ Z^d)`, supplies values on the negative
//! side from interior counts, which are often zero for small `n`. The
//! polynomial is recovered by exact interpolation over the rationals.
//!
//! ```
//! use ehrhart_core::{gt_ehrhart, GTChainSpec, Partition, SkewShape, WeightVector};
//!
//! let shape = SkewShape::straight("3,2,1".parse::<Partition>().unwrap());
//! let spec = GTChainSpec::new(shape, "1^6".parse::<WeightVector>().unwrap());
//! let result = gt_ehrhart(&spec, true).unwrap();
//! assert_eq!(result.dimension, 7);
//! assert_eq!(result.polynomial.eval_integer(1).unwrap(), 16.into());
//! ```

pub mod birkhoff;
pub mod combinatorics;
mod count;
mod lp;
pub mod ehrhart;
pub mod error;
pub mod gt;
pub mod hstar;
pub mod oracles;
pub mod polynomial;
pub mod poset;
pub mod serde_bigint;

pub use birkhoff::{birkhoff_ehrhart, birkhoff_interior_count, magic_square_count, BirkhoffSpec};
pub use combinatorics::{
    contains_pattern, is_horizontal_strip, parse_int_list, transposition_neighborhood, Partition, Permutation,
    SkewShape, WeightVector,
};
pub use ehrhart::{
    adaptive_ehrhart, ehrhart_with_schedule, lagrange_interpolate, verify_polynomial, EhrhartComputation,
    EvaluationPoint, PointEvaluator, Schedule,
};
pub use error::{Error, Result};
pub use gt::{gt_dimension, gt_ehrhart, kostka, scale_spec, strict_kostka, ForcedEqualityMask, GTChainSpec, GtEvaluator};
pub use hstar::{hstar_from_ehrhart, HStarVector, PropertyFlags};
pub use polynomial::RationalPolynomial;
pub use poset::{
    count_linear_extensions, hstar_via_linext, order_polynomial, order_polytope_ehrhart, permutation_hstar,
    search_nonrealrooted, strict_order_polynomial, FrontierPlan, Poset, SearchHit, SearchOutcome,
};
