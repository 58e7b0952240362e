//! Exact combinatorics of singleton mesh patterns (SMPs) in d-dimensional
//! permutations: occurrence checking, avoidability classification via the
//! rank invariant, constructive avoider generation, exhaustive enumeration
//! and generating-function verification.
//!
//! A d-dimensional permutation of length n is a (d-1)-tuple of n-permutations
//! stacked under the identity row; an SMP is a set of sign vectors over
//! {+,-}^d, each shading one hyperoctant around an element.

pub mod construct;
pub mod enumerate;
pub mod multiperm;
pub mod numbers;
pub mod occurrence;
pub mod pattern;
pub mod rank;
pub mod series;
pub mod symmetry;

pub use multiperm::MultiPerm;
pub use pattern::{Sign, SignVector, Smp};
pub use rank::{classify, AvoidabilityClass, Rank};

/// Errors shared across the crate. Every fallible operation reports one of
/// these; none of them panic on bad user input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("dimension must be at least 2 (got {0})")]
    DimensionTooSmall(usize),
    #[error("index {index} out of range 1..={limit}")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("the two element indices must differ")]
    SameIndex,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("pattern columns have unequal lengths")]
    RaggedColumns,
    #[error("duplicate pattern column {0}")]
    DuplicateColumn(String),
    #[error("bad symbol {0:?} in pattern text")]
    BadSymbol(char),
    #[error("pattern is not projective in direction {0}")]
    NotProjective(usize),
    #[error("pattern is not a hyperplane pattern strictly containing the core in direction {0}")]
    NotHyperplane(usize),
    #[error("rank is infinite: pattern is strongly unavoidable")]
    RankInfinite,
    #[error("no avoider of length {requested} exists: every permutation shorter than rank {rank} contains the pattern")]
    LengthTooShort { requested: usize, rank: usize },
    #[error("pattern {0} in the set is unavoidable")]
    SomePatternUnavoidable(String),
    #[error("pattern contains a minus-antipodal subset, so it occurs at most once")]
    HasMinusAntipodalSubset,
    #[error("signature is constant and therefore unrealizable")]
    UnrealizableSignature,
    #[error("bad symbol {0:?}: expected one of 0, 1, 2")]
    BadAlphabet(char),
    #[error("string must contain at least one 0 and one 1")]
    MissingRequiredSymbol,
    #[error("permutation is not in the image of the one-occurrence bijection")]
    NotInBijectionImage,
    #[error("instance too large: {0}")]
    CapacityExceeded(String),
    #[error("enumeration budget exceeded: {checks} elementary checks needed, budget is {budget}")]
    BudgetExceeded {
        checks: num_bigint::BigUint,
        budget: u64,
    },
    #[error("series truncated at x^{trunc}, cannot compare degree {needed}")]
    TruncationTooShort { trunc: usize, needed: usize },
    #[error("unknown case {0}: expected 1..=5")]
    UnknownCase(usize),
    #[error("invalid mesh pattern: {0}")]
    InvalidMeshPattern(String),
}

pub type Result<T> = std::result::Result<T, Error>;
