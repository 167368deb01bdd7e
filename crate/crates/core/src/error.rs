use thiserror::Error;

use crate::exactnum::Rational;

/// Errors raised by the exact arithmetic and modular-forms pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// A coefficient was requested at or beyond the known precision of a series.
    #[error("precision shortfall: coefficient at q^{exponent} requested but series is only known below q^{precision}")]
    Precision { exponent: Box<Rational>, precision: Box<Rational> },

    /// A nonzero coefficient sits at an exponent that belongs to no admissible class.
    #[error("epsilon-condition violated: nonzero coefficient at q^{exponent}")]
    EpsilonCondition { exponent: Rational },

    #[error("modulus mismatch: expected {expected}, got {found}")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate quadratic form: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn shortfall(exponent: Rational, precision: Rational) -> Self {
        Error::Precision { exponent: Box::new(exponent), precision: Box::new(precision) }
    }

    pub fn is_precision(&self) -> bool {
        matches!(self, Error::Precision { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
