//! Exact polynomial-entropy analysis for piecewise-linear interval maps.
//!
//! The exact pipeline works on [`plmap::PLMap`] values with rational
//! breakpoints: fixed-point structure and essential-interval chains
//! ([`fixstruct`]), Sharkovskii-type reduction ([`classify`]), one-way horseshoe
//! certificates ([`horseshoe`]) and the map constructors in [`families`].
//! Approximate cross-checks live in [`seporacle`], [`symbolic`] and
//! [`logistic`]; they never feed back into exact verdicts.

pub mod classify;
pub mod exactnum;
pub mod families;
pub mod fixstruct;
pub mod horseshoe;
pub mod logistic;
pub mod plmap;
pub mod seporacle;
pub mod symbolic;

pub use exactnum::{RInterval, Rational};
pub use plmap::PLMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("piece budget exceeded: {pieces} pieces > cap {cap}")]
    BudgetExceeded { pieces: usize, cap: usize },
    #[error("step budget exceeded: {0}")]
    StepBudgetExceeded(String),
    #[error("map is not of type 1: {0}")]
    NotType1(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("empty chain")]
    EmptyChain,
    #[error("no simple cycle of period 2^{0} found")]
    NoSimpleCycleFound(u32),
    #[error("preimage selection failed: {0}")]
    PreimageSelectionFailure(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("prefix too short: length {len} < required {needed}")]
    PrefixTooShort { len: usize, needed: usize },
    #[error("map is not weakly monotone")]
    NotMonotone,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that mean "ran out of budget" rather than "wrong input".
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::StepBudgetExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Resource caps shared by the exact pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of linear pieces of any composed map.
    pub max_pieces: usize,
    /// Maximum hull-iteration steps when computing an orbit closure.
    pub max_hull_steps: usize,
    /// Largest exponent e tried when searching a horseshoe iterate k = 2^e.
    pub max_iterate_exp: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_pieces: 200_000,
            max_hull_steps: 100_000,
            max_iterate_exp: 16,
        }
    }
}
