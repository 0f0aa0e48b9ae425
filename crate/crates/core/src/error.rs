use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("symbol {symbol} out of range for an alphabet of {n} letters")]
    SymbolOutOfRange { symbol: usize, n: usize },
    #[error("word component of length {0} exceeds the limit of {max}", max = crate::tree::MAX_WORD_LEN)]
    WordTooLong(usize),
    #[error("eventually periodic word needs a nonempty period")]
    EmptyPeriod,
    #[error("relation sides must start with different letters")]
    SameFirstLetter,
    #[error("parameter outside the admissible region: {0}")]
    DomainViolation(String),
    #[error("symbolic operation on a family with conjugated letters")]
    ConjugateFamilyUnsupported,
    #[error("no admissible parameter found after {0} attempts")]
    NoAdmissibleSamples(usize),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("root finder did not converge (residual {residual:e} after {sweeps} sweeps)")]
    NonConvergence { residual: f64, sweeps: usize },
    #[error("polynomial has degree zero after trimming")]
    ConstantPolynomial,
    #[error("budget exceeded: {what} needs {needed}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("frontier overflow at depth {depth} ({size} points)")]
    FrontierOverflow { depth: usize, size: usize },
    #[error("bisection bracket does not straddle a root")]
    BracketFailure,
    #[error("no sign change of the locus equation along the ray")]
    NoSignChange,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
