use thiserror::Error;

/// Errors raised while building or manipulating rings, polynomials and
/// the constructions layered on top of them.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator orders must be positive (index {0})")]
    NonPositiveOrder(usize),

    #[error("malformed structure constants: {0}")]
    Dimension(String),

    #[error("not associative on generators ({i},{j},{l}): (g{i}g{j})g{l} = {left:?} but g{i}(g{j}g{l}) = {right:?}")]
    NotAssociative {
        i: usize,
        j: usize,
        l: usize,
        left: Vec<i64>,
        right: Vec<i64>,
    },

    #[error("product g{i}*g{j} is not killed by the generator orders")]
    IllDefined { i: usize, j: usize },

    #[error("claimed unit is not a two-sided identity (fails on generator {0})")]
    BadUnit(usize),

    #[error("not a ring homomorphism: {0}")]
    NotHom(String),

    #[error("budget exceeded: {required} candidates needed, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("membership violation: {0}")]
    MembershipViolation(String),

    #[error("index {index} out of range for level {level}")]
    IndexOutOfRange { index: usize, level: usize },

    #[error("map is not surjective: {0}")]
    NotSurjective(String),

    #[error("verification failed: {0}")]
    VerificationFailure(String),

    #[error("requested depth {requested} exceeds the configured cap {cap}")]
    DepthExceeded { requested: usize, cap: usize },

    #[error("rings do not match: {0}")]
    RingMismatch(String),

    #[error("unsupported construction: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
