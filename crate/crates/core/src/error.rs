use alloc::string::String;
use core::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    Domain(&'static str),
    /// An interval value (or a bracket refinement loop) could not decide a
    /// comparison within the precision budget.
    PrecisionExhausted { budget_bits: u32 },
    /// A digit horizon was reached before the queried quantity resolved.
    HorizonExceeded { needed: usize, horizon: usize },
    /// Quadratic values over distinct radicands cannot be mixed.
    MixedRadicands { left: u64, right: u64 },
    DivisionByZero,
    /// The point left the Cantor set `H` at the given digit depth.
    NotInDomain { depth: usize },
    /// No schedule entry satisfying the sparsity conditions was found below
    /// the search horizon.
    ScheduleInfeasible { horizon: usize },
    EmptyAggregate,
    /// An exactly-checked bound from a proven lemma failed; this falsifies
    /// the implementation, not the lemma.
    BoundViolation(String),
    /// Enumeration was refused because it would materialize too many words.
    MemoryGuard { requested: u128, limit: u128 },
    /// An exact self-check failed (implementation bug).
    AssertionFailure(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::PrecisionExhausted { budget_bits } => {
                write!(f, "precision budget of {budget_bits} bits exhausted")
            }
            Error::HorizonExceeded { needed, horizon } => {
                write!(f, "digit horizon {horizon} exceeded (needed {needed})")
            }
            Error::MixedRadicands { left, right } => {
                write!(f, "cannot mix quadratic values over sqrt({left}) and sqrt({right})")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotInDomain { depth } => {
                write!(f, "point is not in the target set (failed at digit {depth})")
            }
            Error::ScheduleInfeasible { horizon } => {
                write!(f, "no feasible schedule entry below horizon {horizon}")
            }
            Error::EmptyAggregate => write!(f, "no unskipped records to aggregate"),
            Error::BoundViolation(msg) => write!(f, "bound violation: {msg}"),
            Error::MemoryGuard { requested, limit } => {
                write!(f, "enumeration of {requested} words refused (limit {limit})")
            }
            Error::AssertionFailure(msg) => write!(f, "exact self-check failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
