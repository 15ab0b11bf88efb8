//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors surfaced by the workbench.
///
/// Every fallible operation returns one of these variants; none of them is
/// used for control flow except [`Error::NotInFChi`], which doubles as the
/// negative answer to a definedness question (whether an ideal inverse acts
/// on a given character).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the operation's domain (zero divisor, empty input, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Two arguments were required to be coprime and are not.
    #[error("arguments are not coprime: {0}")]
    NotCoprime(String),

    /// A torsion point or Galois element does not fit the character level.
    #[error("level mismatch: {0}")]
    LevelMismatch(String),

    /// The requested character root does not exist: the character is
    /// nontrivial on the torsion of the given ideal.
    #[error("character has no root at this ideal: {0}")]
    NotInFChi(String),

    /// The operation needs a character admissible at its level.
    #[error("admissible character required: {0}")]
    AdmissibilityRequired(String),

    /// Numeric evaluation requested in the divergent range (beta <= 1).
    #[error("series diverges: {0}")]
    DivergentSeries(String),

    /// A truncated-representation check was asked on a block where
    /// truncation artifacts can leak in; raise the cutoff degree.
    #[error("truncation unsafe: {0}")]
    UnsafeTruncation(String),

    /// Expression or polynomial text failed to parse.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Inconsistent global configuration (q not a prime power, reducible
    /// modulus, ...).
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
