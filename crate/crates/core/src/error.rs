use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("value {value} is outside the domain [{min}, {max}] of variable `{variable}`")]
    OutOfDomain {
        variable: String,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("membership function index {index} is invalid for variable `{variable}` with {count} functions")]
    InvalidMfIndex {
        variable: String,
        index: usize,
        count: usize,
    },
    #[error("invalid variable `{variable}`: {reason}")]
    InvalidVariable { variable: String, reason: String },
    #[error("invalid rule {rule}: {reason}")]
    InvalidRule { rule: usize, reason: String },
    #[error("rules {first} and {second} share the same antecedent")]
    DuplicateAntecedent { first: usize, second: usize },
    #[error("rule base is empty")]
    NoRules,
    #[error("expected {expected} input values, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dataset is empty")]
    EmptyData,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("chromosome has {found} genes, skeleton needs {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("crossover cut {cut} must lie strictly inside a chromosome of length {len}")]
    InvalidCut { cut: usize, len: usize },
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
    #[error("{field} = {value} is outside [{min}, {max}]")]
    FactorOutOfRange {
        field: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("population is empty")]
    EmptyPopulation,
}
