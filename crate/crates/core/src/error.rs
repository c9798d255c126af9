use thiserror::Error;

/// Errors shared across the crate.
///
/// `Verification` is special: it signals that an internal consistency check
/// failed (classifier disagreement, a decomposition map that is not an
/// isomorphism, a count identity that does not hold). Callers should treat it
/// as a bug in this library, not as bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size {0}: must be between 1 and {max}", max = crate::perm::MAX_SIZE)]
    InvalidSize(usize),

    #[error("one-line notation is not a permutation of 1..={n}: {reason}")]
    InvalidOneLine { n: usize, reason: String },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("letter {letter} out of range 1..={max}")]
    LetterOutOfRange { letter: usize, max: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("generator {0} is not in the support")]
    NotInSupport(usize),

    #[error("generator {0} repeats in some reduced word, so deletion is undefined")]
    NotDeletable(usize),

    #[error("generator {0} is not unconfined")]
    NotUnconfined(usize),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("{what} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
