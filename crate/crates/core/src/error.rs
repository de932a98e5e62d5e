//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("predicate `{0}` is not declared")]
    UnknownPredicate(String),
    #[error("predicate `{pred}` used with {got} arguments, declared with arity {declared}")]
    ArityMismatch {
        pred: String,
        declared: usize,
        got: usize,
    },
    #[error("the two-variable fragment allows only the logical variables x and y (got `{0}`)")]
    VariableLimit(String),
    #[error("sentence has a free variable `{0}`")]
    FreeVariable(String),
    #[error("predicate `{0}` has no entry in the weight map")]
    MissingWeight(String),
    #[error("predicate `{0}` is not binary")]
    NotBinary(String),
    #[error("predicate `{0}` is not unary")]
    NotUnary(String),
    #[error("unsupported counting quantifier: {0}")]
    UnsupportedCounting(String),
    #[error("unsupported quantifier shape: {0}")]
    UnsupportedShape(String),
    #[error("evidence assigns both signs of {pred}({element})")]
    ContradictoryEvidence { pred: String, element: usize },
    #[error("evidence mentions element {0}, but the domain size is {1}")]
    EvidenceOutOfRange(usize, usize),
    #[error("{0} distinct evidence signatures exceed the supported limit of {1}")]
    TooManyEvidenceGroups(usize, usize),
    #[error("domain size must be at least 1")]
    DomainTooSmall,
    #[error("relation `{0}` lacks the symmetric/irreflexive closure clauses")]
    ClosureMissing(String),
    #[error("oracle instance too large: {0} ground atoms exceed the limit of {1}")]
    OracleTooLarge(usize, usize),
    #[error("interpolation nodes must be pairwise distinct")]
    DuplicateNodes,
    #[error("not enough interpolation points: need {need}, got {got}")]
    InsufficientPoints { need: usize, got: usize },
    #[error("interpolation input does not form a complete grid")]
    IncompleteGrid,
    #[error("interpolation data is not consistent with the requested degree bound")]
    DegreeExceeded,
    #[error("odd power of the edge-tracking variable; is the relation closed under symmetry?")]
    OddVPower,
    #[error("inexact polynomial division; the family does not satisfy the encoding hypothesis")]
    InexactDivision,
    #[error("the sentence family has no models at this size")]
    EmptyFamily,
    #[error("expected exactly one axiom annotation, found {0}")]
    AxiomCount(usize),
    #[error("axiom `{kind}` requires {what}")]
    AxiomParameter { kind: String, what: String },
    #[error("block specification invalid: {0}")]
    BadBlockSpec(String),
    #[error("block sizes sum to {sum}, but the domain size is {n}")]
    BlockSizeMismatch { sum: usize, n: usize },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
