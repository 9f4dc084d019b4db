use alloc::string::String;

/// Errors raised by the coefficient pipelines, the evaluators and the oracle.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("series constant term must be {expected}")]
    ConstantTerm { expected: &'static str },
    #[error("truncation orders or lengths differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("invalid gamma-ratio spec: {0}")]
    InvalidSpec(String),
    #[error("gamma ratio is not balanced: sum A = {sum_a}, sum B = {sum_b}")]
    Unbalanced { sum_a: String, sum_b: String },
    #[error("expansion needs mu = 1 but mu = {0}; use the gamma-prefactor form (theta)")]
    MuNotOne(String),
    #[error("mu = {0} is a nonpositive integer; the Norlund-Bernoulli route degenerates, use the Stirling route")]
    MuNonPositiveInteger(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("{0} is on the branch cut of log-gamma")]
    BranchCut(String),
    #[error("requested order {requested} but coefficients are stored only up to order {available}")]
    Range { requested: usize, available: usize },
    #[error("cancelation decision for {0} is within the float coincidence tolerance")]
    Ambiguous(String),
    #[error("excluded parameter: {0}")]
    ExcludedParameter(String),
    #[error("argument outside the supported sector: {0}")]
    Sector(String),
}
