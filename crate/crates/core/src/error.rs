use thiserror::Error;

/// Errors raised by the model and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// A parameter violates its type invariant. `field` is the dotted path
    /// used by the scenario file schema (e.g. `consumer.alpha`).
    #[error("invalid value for {field}: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("budget equation has no positive root in year {year}: right-hand side {rhs} <= 0")]
    NonPositiveBudget { year: u32, rhs: f64 },

    #[error("root solver did not converge in year {year} after {iterations} iterations")]
    SolverDidNotConverge { year: u32, iterations: u32 },

    #[error("explicit expenditure schedule has {available} values but {needed} are required")]
    ScheduleTooShort { needed: usize, available: usize },

    #[error("closed-form debt solutions divide by r and require r > 0")]
    RateIsZero,

    #[error("decrease condition is degenerate for alpha = 0")]
    AlphaIsZero,

    #[error("fixed-point closed forms and conditions require alpha == gamma (alpha = {alpha}, gamma = {gamma})")]
    UnequalRates { alpha: f64, gamma: f64 },

    #[error("fixed-point closed forms and conditions require beta = 0 (beta = {beta})")]
    WealthTaxPresent { beta: f64 },

    #[error("fixed-point closed form requires a constant expenditure schedule")]
    ScheduleNotConstant,

    #[error("year index must be >= 1, got {0}")]
    InvalidYear(u32),
}

impl ModelError {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ModelError::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, ModelError>;
