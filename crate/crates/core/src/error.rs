use thiserror::Error;

use crate::exactalg::ChowElement;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{name}` has degree {degree}; degrees must be positive")]
    InvalidDegree { name: String, degree: i64 },
    #[error("invalid generator name `{0}`")]
    InvalidGeneratorName(String),
    #[error("ring has {0} basis monomials, more than the supported {max}", max = crate::exactalg::MAX_BASIS)]
    RingTooLarge(usize),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("exponential needs an element without constant part")]
    NonzeroConstant,
    #[error("series is not invertible: its scalar part vanishes")]
    NotInvertible,
    #[error("series is not convergent at q -> 0 ({} negative coefficients)", offending.len())]
    NotConvergent { offending: Vec<(i64, ChowElement)> },
    #[error("series is only known up to q^{have}, q^{needed} is required")]
    InsufficientPrecision { needed: i64, have: i64 },
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown generator `{name}` at position {pos}")]
    UnknownGenerator { name: String, pos: usize },
    #[error("Ch_{l} must be homogeneous of degree {l}")]
    NotHomogeneous { l: usize },
    #[error("Chern character list has {got} entries, the ring needs at most {max}")]
    TooManyChernCharacters { got: usize, max: usize },
    #[error("the class is undefined at t = 1")]
    TIsOne,
    #[error("equivariant weight must be nonzero")]
    ZeroWeight,
    #[error("chain needs at least one exponent")]
    EmptyChain,
    #[error("exponent a_{index} = {value} is not allowed: {reason}")]
    InvalidExponent { index: usize, value: u64, reason: &'static str },
    #[error("integer overflow while {0}")]
    Overflow(&'static str),
    #[error("got {got} entries where the chain has {expected} variables")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("{0} is not a diagonal symmetry of W")]
    NotASymmetry(String),
    #[error("2g - 2 + n must be positive (g = {g}, n = {n})")]
    Unstable { g: u64, n: u64 },
    #[error("expected {expected} sector labels, got {got}")]
    SectorCountMismatch { expected: usize, got: usize },
    #[error("chain is not of Calabi-Yau type (d = {degree}, sum of weights = {weight_sum})")]
    NotCalabiYau { degree: u64, weight_sum: u64 },
    #[error("index k must be positive")]
    NonPositiveIndex,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
