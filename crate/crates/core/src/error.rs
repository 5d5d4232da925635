use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("no Dirichlet inverse: the first term of the sequence is zero")]
    NoDirichletInverse,

    #[error("dependent triangular system: zero diagonal entry at row {0}")]
    DependentSystem(usize),

    #[error("degenerate Padé block [{m}/{n}]: the denominator system is singular")]
    DegeneratePade { m: usize, n: usize },

    #[error("family mismatch: {kind} approximant cannot be measured by the {family} functionals")]
    FamilyMismatch { kind: String, family: String },

    #[error("evaluation error in {primitive}: {detail}")]
    Eval { primitive: &'static str, detail: String },

    #[error("{primitive} has no exact rational value at this point")]
    Inexact { primitive: &'static str },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("incompatible jets: {0}")]
    JetMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("duplicate interpolation node {0}")]
    DuplicateNode(f64),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn eval(primitive: &'static str, detail: impl Into<String>) -> Self {
        Error::Eval {
            primitive,
            detail: detail.into(),
        }
    }
}
