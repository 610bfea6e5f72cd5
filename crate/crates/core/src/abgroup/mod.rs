//! Exact integer linear algebra and finite abelian groups.
//!
//! Groups are kept in invariant-factor form `ℤ/d₁ ⊕ … ⊕ ℤ/d_r` with
//! `d₁ | d₂ | … | d_r` and every `dᵢ ≥ 2`. Elements are integer vectors
//! reduced componentwise modulo the factors. Subgroups carry a canonical
//! Hermite basis so equality is a matrix comparison.

mod dual;
pub(crate) mod elim;
mod group;
mod matrix;
mod subgroup;
mod wedge;

pub use dual::{annihilator, dual_group, Pairing};
pub use group::{cokernel, direct_sum, AbHom, Cokernel, DirectSum, FinAbGroup, Quotient};
pub use matrix::{
    cokernel_data, hermite_full_rank, integer_kernel, kernel_with_inverse, rank, smith_diagonal, snf,
    CokernelData, IntMatrix, Snf,
};
pub use subgroup::{all_subgroups, cyclic_subgroups, AbSubgroup, SubgroupGroup};
pub use wedge::{wedge_square, WedgeSquare};

use num_bigint::BigInt;

/// Element of a finite abelian group in generator coordinates.
pub type Elem = Vec<BigInt>;

/// Converts small integers into an element vector.
pub fn elem(v: &[i64]) -> Elem {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbError {
    #[error("matrix with {rows}x{cols} shape given {got} entries")]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("invalid invariant factors {0:?}: need d1 | d2 | ... with every factor >= 2")]
    InvalidFactors(Vec<String>),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("homomorphism is not well defined on generator {0}")]
    NotWellDefined(usize),
    #[error("subgroups live in different ambient groups")]
    AmbientMismatch,
    #[error("subgroup is not contained in the given group")]
    NotContained,
}
