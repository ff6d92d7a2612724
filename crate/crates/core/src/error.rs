use alloc::string::String;
use core::fmt;

/// Errors produced by game construction, probability computations, and the
/// equilibrium solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two distributions (or a rule and a distribution) disagree in dimension.
    DimensionMismatch { left: usize, right: usize },
    /// A probability vector does not sum to one within the construction
    /// tolerance.
    NotNormalized { sum: f64 },
    /// A parameter is outside its admissible range; the message names it.
    InvalidParameter(String),
    /// A word contains a symbol outside the alphabet `{0, .., d-1}`.
    SymbolOutOfRange { symbol: usize, alphabet: usize },
    /// An enumeration would exceed the configured size cap.
    SizeCapExceeded { required: u128, cap: u128 },
    /// A decision rule violates the Neyman-Pearson false-alarm budget.
    FalseAlarmBudget { type_i: f64, epsilon: f64 },
    /// An operation requires two distinct hypotheses but got `p == q`.
    DegenerateHypotheses,
    /// The simplex hit its pivot cap; carries the best duality gap seen.
    PivotLimit { pivots: u64, gap: f64 },
    /// The LP solutions did not certify the game value to tolerance.
    DualityGap { gap: f64, tol: f64 },
    /// The LP is unbounded (cannot happen for well-formed game matrices).
    Unbounded,
    /// No equilibrium found within the searched support sizes.
    NoEquilibrium,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::NotNormalized { sum } => {
                write!(f, "probabilities sum to {sum}, not 1")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::SymbolOutOfRange { symbol, alphabet } => {
                write!(f, "symbol {symbol} outside alphabet of size {alphabet}")
            }
            Error::SizeCapExceeded { required, cap } => {
                write!(f, "enumeration of {required} items exceeds cap {cap}")
            }
            Error::FalseAlarmBudget { type_i, epsilon } => {
                write!(f, "false-alarm probability {type_i} exceeds budget {epsilon}")
            }
            Error::DegenerateHypotheses => write!(f, "hypotheses p and q coincide"),
            Error::PivotLimit { pivots, gap } => {
                write!(f, "simplex stalled after {pivots} pivots (best gap {gap})")
            }
            Error::DualityGap { gap, tol } => {
                write!(f, "duality gap {gap} exceeds tolerance {tol}")
            }
            Error::Unbounded => write!(f, "linear program is unbounded"),
            Error::NoEquilibrium => write!(f, "no equilibrium found"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
