use thiserror::Error;

/// Errors raised by the nilpotent calculus and the verification harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator {0} is not part of the context")]
    UnknownGenerator(u32),

    #[error("nilpotent generator supply exhausted ({0} live generators)")]
    GeneratorOverflow(usize),

    #[error("primitive `{0}` cannot be lifted in exact rational mode")]
    NonPolynomialInExactMode(String),

    #[error("cannot lift `{0}`: the non-nilpotent part of the argument is not a scalar")]
    NonScalarBase(String),

    #[error("argument {index} is not infinitesimal (nonzero constant term)")]
    NotInfinitesimal { index: usize },

    #[error("index {index} out of range 1..={arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("not a permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("microsquares disagree on D(2) at coefficient {subset:?}")]
    D2Disagreement { subset: Vec<usize> },

    #[error("relativized strong difference (i = {index}) undefined: cubes disagree at coefficient {subset:?}")]
    AgreementViolation { index: usize, subset: Vec<usize> },

    #[error("general Jacobi expression {expression} is not well defined: {source}")]
    IllDefined {
        expression: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("tangent vectors have different base points")]
    BaseMismatch,

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("input is not a form (alternating condition fails for {0:?})")]
    NotAForm(Vec<usize>),

    #[error("derivative order {order} exceeds the supported lift")]
    DerivativeOrder { order: usize },

    #[error("closure violation: {0}")]
    Closure(String),

    #[error("semiform is not tensorial: {0}")]
    NotTensorial(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
