use thiserror::Error;

/// Errors produced by the library. Theorem violations are never errors; they
/// are reported through the verdict types of the individual checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("modulus {0} is out of range")]
    ModulusOutOfRange(u64),

    #[error("operation requires an odd prime, got {0}")]
    EvenCharacteristic(u32),

    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),

    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),

    #[error("determinant is {det}, expected 1")]
    BadDeterminant { det: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("element is not regular semisimple (trace^2 = 4)")]
    NotRegularSemisimple,

    #[error("element is not strongly regular (regular semisimple with non-zero trace)")]
    NotStronglyRegular,

    #[error("generating set is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("invalid generating set: {0}")]
    InvalidGenerators(String),

    #[error("generators {first} and {second} reduce to the same element mod {p}")]
    GeneratorCollision { p: u32, first: String, second: String },

    #[error("generator {0} reduces to the identity mod {1}")]
    GeneratorIsIdentity(String, u32),

    #[error("operator norms are all 1, tau is undefined")]
    TauUndefined,

    #[error("size budget exceeded: {what} needs {needed}, budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("exact path counts overflow 128 bits after {0} steps")]
    CountOverflow(usize),

    #[error("set does not generate the group")]
    NotGenerating,

    #[error("set is not a subgroup")]
    NotSubgroup,

    #[error("subgroup is not proper")]
    NotProper,

    #[error("empty set")]
    EmptySet,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("Cayley graph is disconnected")]
    Disconnected,

    #[error("eigensolver did not converge within {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
