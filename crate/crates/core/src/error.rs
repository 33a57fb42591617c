//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Result`]. Errors are split
//! between *configuration* problems (bad arguments, budget violations) and
//! *numerical* failures (quadrature non-convergence, singular systems), so a
//! caller can map them onto distinct exit codes.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A jet was requested or produced with more than [`crate::jet::MAX_ORDER`]
    /// derivative orders.
    #[error("jet order budget exceeded: needed order {needed}, maximum is {max}")]
    OrderBudget { needed: usize, max: usize },

    /// Arithmetic between jets expanded at different base points.
    #[error("mismatched jet base points: {left} vs {right}")]
    MismatchedBasePoints { left: f64, right: f64 },

    /// A k-fold derivative was requested from a jet of lower order.
    #[error("derivative order {k} exceeds jet order {order}")]
    DerivativeExceedsOrder { k: usize, order: usize },

    /// Division by a jet whose constant term vanishes.
    #[error("division by a jet with vanishing constant term")]
    DivisionByZero,

    /// A negative integer power of a jet whose constant term vanishes.
    #[error("negative power of a jet with vanishing constant term")]
    NegativePowerOfZero,

    /// An empty coefficient list or similar malformed jet construction.
    #[error("invalid jet construction: {0}")]
    InvalidJet(String),

    /// Operators with negative k are not supported.
    #[error("operator index k = {0} is negative; antiderivative-indexed operators are not supported")]
    NegativeOperatorIndex(i32),

    /// The input jet has too low an order for the requested operator.
    #[error("insufficient jet order {order} for operator consuming {consumed} orders")]
    InsufficientOrder { order: usize, consumed: usize },

    /// A point fell outside the configured domain box.
    #[error("point {point} outside domain [{min}, {max}]")]
    OutsideDomain { point: f64, min: f64, max: f64 },

    /// Adaptive quadrature did not converge within the subdivision budget.
    #[error("quadrature did not converge within {panels} panels (requested relative tolerance {tol:e})")]
    QuadratureBudget { panels: u64, tol: f64 },

    /// An integration interval with end before start.
    #[error("invalid interval [{start}, {end}]: end precedes start")]
    InvalidInterval { start: f64, end: f64 },

    /// The least-squares system for coefficient recovery is singular in a way
    /// that is not the expected rank-1 degeneracy.
    #[error("singular recovery system: {0}")]
    SingularSystem(String),

    /// A bracket value sat below the safe-division floor.
    #[error("bracket value {value:e} below the division floor {floor:e} at the evaluation point")]
    VanishingBracket { value: f64, floor: f64 },

    /// A normalizer in a residual computation vanished.
    #[error("vanishing normalizer: {0}")]
    VanishingNormalizer(String),

    /// Invalid run or scan configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Invalid argument to an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors that stem from how a computation was configured, as
    /// opposed to a numerical failure during the computation itself.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::OrderBudget { .. }
                | Error::InvalidJet(_)
                | Error::NegativeOperatorIndex(_)
                | Error::InvalidInterval { .. }
                | Error::OutsideDomain { .. }
                | Error::InvalidConfig(_)
                | Error::InvalidArgument(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
