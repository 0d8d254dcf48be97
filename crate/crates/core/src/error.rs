//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid monodromy tuple: {0}")]
    InvalidMonodromy(String),

    #[error("odd total ramification degree {0}")]
    Parity(usize),

    #[error("negative genus for degree {degree} and ramification degree {delta}")]
    NegativeGenus { degree: usize, delta: usize },

    #[error("invalid cover morphism: {0}")]
    InvalidMorphism(String),

    #[error("target cycle length {target_len} does not divide source cycle length {source_len}")]
    Divisibility {
        source_len: usize,
        target_len: usize,
    },

    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),

    #[error("Euler characteristic mismatch: {0}")]
    EulerMismatch(String),

    #[error("torsion in surface homology: {0}")]
    TorsionFound(String),

    #[error("intersection form not unimodular: |det| = {0}")]
    NonUnimodular(String),

    #[error("image of a basis cycle is not a cycle")]
    NotACycleImage,

    #[error("pushforward after transfer is not {0} times the identity")]
    CompositionMismatch(usize),

    #[error("degenerate restricted form")]
    DegenerateForm,

    #[error("sublattices are not complementary: {0}")]
    NotComplementary(String),

    #[error("kernel identity violated: {0}")]
    IdentityViolated(String),

    #[error("cover degrees {0} and {1} are not coprime")]
    GcdViolated(usize, usize),

    #[error("endomorphism is not an exponent-6 projector: {0}")]
    NotExponentSix(String),

    #[error("endomorphism requires cover degrees (3, 2), got ({0}, {1})")]
    WrongRegime(usize, usize),

    #[error("dimension {0} is below the family minimum {1}")]
    OutOfRange(i64, i64),

    #[error("no witness found: {0}")]
    NotFound(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("inconsistent diagram: {0}")]
    InconsistentDiagram(String),

    #[error("symmetric Prym constructions disagree")]
    SymmetryMismatch,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
