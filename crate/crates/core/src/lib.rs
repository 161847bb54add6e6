//! Exact symmetric-function machinery for the k-sum reconstruction problem:
//! can a multiset `A` of `n` numbers be recovered from the multiset of its
//! `k`-element sums?
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: exact rationals and sparse multivariate polynomials.
//! * [`multiset`]: number multisets, k-sum multisets, concrete power sums.
//! * [`symfunc`]: generated identities between power sums of `A` and of `A^(k)`.
//! * [`elimination`]: reduction of the `(12, 4)` system to a quadratic in `S6`.
//! * [`search`]: bounded exhaustive search for colliding multisets.

pub mod algebra;
pub mod elimination;
pub mod error;
pub mod multiset;
pub mod report;
pub mod search;
pub mod symfunc;

pub use algebra::{Family, Monomial, Rational, SparsePolynomial, VarId};
pub use error::{Error, Result};
pub use multiset::{
    ksums, multiset_equal, normalize_affine, power_sum, power_sum_vector, AffineNormalization,
    NumberMultiset, PowerSumVector, SumMultiset,
};
pub use report::CoefficientCheck;
pub use search::{find_collisions, verify_record, CollisionRecord, SearchSpec};
pub use symfunc::{
    e_expansion, e_expansion_unreduced, e_power_sums, macmahon_reduce, monomial_power_sum_direct,
    reduce_monomial, Composition, Partition,
};
