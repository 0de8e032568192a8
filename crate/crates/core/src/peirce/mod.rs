//! Non-unital rings with Peirce decompositions over `K = Z/n`.
//!
//! Block indices are 0-based throughout the library; the text format in
//! [`format`] uses 1-based indices.

mod constructions;
mod fin_ring;
pub mod format;
mod morphism;
mod predicates;
mod ring;
mod tensor;

pub use constructions::{
    collapse_rank, grouped_mat_ring, mat_ring, morita_ring, peirce_from_idempotents, reduced_quotient, regroup,
    universal_ring, ReducedQuotient, UniversalRing,
};
pub use fin_ring::FinRing;
pub use morphism::PeirceHom;
pub use predicates::{
    annihilator_block, check_predicates, fullness, is_firm, is_idempotent, is_reduced, local_units,
    FirmWitness, IdempotentWitness, PeircePredicateReport, ReducedWitness,
};
pub use ring::PeirceRing;
pub use tensor::{tensor_over_ring, RingTensor};

use crate::exact_linalg::{Elem, LinalgError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PeirceError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(i64),
    #[error("rank must be at least {required}, got {rank}")]
    RankTooSmall { rank: usize, required: usize },
    #[error("block ({i},{j}) has exponent {exponent}, which does not divide {modulus}")]
    NotKModule {
        i: usize,
        j: usize,
        exponent: i64,
        modulus: i64,
    },
    #[error("associativity fails for blocks {indices:?} on generators {generators:?}")]
    NotAssociative {
        indices: Option<(usize, usize, usize, usize)>,
        generators: (usize, usize, usize),
    },
    #[error("the given unit is not a two-sided identity")]
    NotUnital,
    #[error("not a complete orthogonal idempotent family: {0}")]
    NotIdempotentFamily(String),
    #[error("the action is not associative on generators {0:?}")]
    ActionNotAssociative((usize, usize, usize)),
    #[error("the Peirce decomposition is not idempotent: {0:?}")]
    NotIdempotent(IdempotentWitness),
    #[error("the pairing is not surjective onto the ring")]
    PairingNotSurjective,
    #[error("the pairing is not balanced: {0}")]
    PairingNotBalanced(String),
    #[error("module is not firm: {0}")]
    ModuleNotFirm(String),
    #[error("{0:?} is not an element of block ({1},{2})")]
    NotInBlock(Elem, usize, usize),
    #[error("partition must cover 0..{0} by consecutive nonempty parts")]
    BadPartition(usize),
}
