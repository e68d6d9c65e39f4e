use std::path::PathBuf;

use thiserror::Error;

use crate::subset::Subset;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid order {0}: a semigroup needs at least one element")]
    InvalidOrder(usize),

    #[error("group spec error at position {position}: {message}")]
    Spec { position: usize, message: String },

    #[error("invalid table: {0}")]
    Validation(String),

    #[error("table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("size guard: {what} = {value} exceeds the supported maximum {max}")]
    SizeGuard {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("size guard: {what} = {value} is below the supported minimum {min}")]
    SizeGuardMin {
        what: &'static str,
        value: usize,
        min: usize,
    },

    #[error("transversal of the empty family is undefined")]
    UndefinedTransversal,

    #[error("oracle is not monotone: accepts {accepted} but rejects its superset {rejected}")]
    NotMonotone { accepted: Subset, rejected: Subset },

    #[error("oracle accepts the empty set")]
    EmptyMember,

    #[error("subset {subset} is not contained in the ground set of size {n}")]
    OutOfGround { subset: Subset, n: usize },

    #[error("element {element} is out of range for order {n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("ground-set mismatch: expected size {expected}, found {found}")]
    GroundMismatch { expected: usize, found: usize },

    #[error("family is not a maximal linked system")]
    NotMaximalLinked,

    #[error("operation requires a group: {0}")]
    NotAGroup(&'static str),

    #[error("certificate shape error: {0}")]
    CertificateShape(String),

    #[error("precondition violated: {y}*{z} != {z}*{y}")]
    PreconditionViolated { y: usize, z: usize },

    #[error("unknown suite `{0}`; expected one of {1}")]
    UnknownSuite(String, String),

    #[error("malformed family text: {0}")]
    FamilySyntax(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
