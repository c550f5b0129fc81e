use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: arrow `{arrow}` has undeclared endpoint `{vertex}`")]
    DanglingEndpoint { line: usize, arrow: String, vertex: String },
    #[error("line {line}: duplicate {kind} name `{name}`")]
    DuplicateName { line: usize, kind: &'static str, name: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("ideal is not admissible: {0}")]
    NotAdmissible(String),
    #[error("length cap {cap} reached with new basis vectors; possibly infinite dimensional")]
    PossiblyInfiniteDimensional { cap: usize },
    #[error("too many paths to enumerate (cap {cap})")]
    ExplosionGuard { cap: usize },
    #[error("elements are not composable")]
    Incomposable,
    #[error("parameters out of range: {0}")]
    ParamsOutOfRange(String),
    #[error("dimension not increasing in a family parameter: {0}")]
    Monotonicity(String),
    #[error("vertex `{0}` is not a source")]
    NotSource(String),
    #[error("vertex `{0}` is not a sink")]
    NotSink(String),
    #[error("vertex `{0}` is not a node")]
    NotNode(String),
    #[error("vertex `{0}` needs both incoming and outgoing arrows")]
    NotTransition(String),
    #[error("glueing needs two distinct vertices")]
    SameVertex,
    #[error("{what} count {count} exceeds cap {cap}")]
    Cap { what: &'static str, count: usize, cap: usize },
    #[error("algebra is not monomial: {0}")]
    NonMonomial(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
}
