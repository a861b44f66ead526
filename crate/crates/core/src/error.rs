use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("requested precision of {requested} bits exceeds the {supported} bits supported by the embedded constant")]
    PrecisionUnsupported { requested: u32, supported: u32 },

    #[error("memory budget exceeded: {needed} bytes needed, {budget} allowed")]
    BudgetExceeded { needed: u64, budget: u64 },

    #[error("enclosure straddles a truncation boundary; more precision is required")]
    StraddlesBoundary,

    #[error("no certified answer at the precision cap of {cap} bits")]
    Indeterminate { cap: u32 },

    #[error("divisor enclosure contains zero")]
    DivisionByZero,

    #[error("embedded constant failed its self-check: {0}")]
    CorruptConstant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
