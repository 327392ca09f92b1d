use thiserror::Error;

use crate::name::Name;

/// A violated groupoid law or malformed table entry.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidViolation {
    #[error("duplicate object {0}")]
    DuplicateObject(Name),
    #[error("duplicate arrow {0}")]
    DuplicateArrow(Name),
    #[error("bad endpoints at {element}: {detail}")]
    BadEndpoints { element: Name, detail: String },
    #[error("missing identity for object {0}")]
    MissingIdentity(Name),
    #[error("missing inverse for arrow {0}")]
    MissingInverse(Name),
    #[error("missing composite of {second} after {first}")]
    MissingComposite { first: Name, second: Name },
    #[error("conflicting table entries for {0}")]
    Conflicting(Name),
    #[error("identity law fails for arrow {0}")]
    IdentityLaw(Name),
    #[error("inverse law fails for arrow {arrow} with stored inverse {inverse}")]
    InverseLaw { arrow: Name, inverse: Name },
    #[error("composition is not associative on {f}, {g}, {h}")]
    NonAssociative { f: Name, g: Name, h: Name },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorViolation {
    #[error("no image given for {0}")]
    Unmapped(Name),
    #[error("image of arrow {0} has the wrong endpoints")]
    BadEndpointImage(Name),
    #[error("identity of {0} is not sent to an identity")]
    IdentityNotPreserved(Name),
    #[error("composite of {second} after {first} is not preserved")]
    CompositionNotPreserved { first: Name, second: Name },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationViolation {
    #[error("arrow {arrow} has no lift at {object}")]
    NotAFibration { object: Name, arrow: Name },
    #[error("cleavage gives no lift of {arrow} at {object}")]
    MissingLift { object: Name, arrow: Name },
    #[error("{lift} is not a lift of {arrow} starting at {object}")]
    BadLift { object: Name, arrow: Name, lift: Name },
    #[error("identity at {0} does not lift to an identity")]
    NotNormal(Name),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid groupoid: {}", join(.0))]
    Groupoid(Vec<GroupoidViolation>),
    #[error("invalid functor: {}", join(.0))]
    Functor(Vec<FunctorViolation>),
    #[error("invalid fibration: {}", join(.0))]
    Fibration(Vec<FibrationViolation>),
    #[error("unknown object {0}")]
    UnknownObject(Name),
    #[error("unknown arrow {0}")]
    UnknownArrow(Name),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),
    #[error("the given arrows do not form a cone over the cospan")]
    NotACone,
    #[error("lifting square does not commute")]
    NotCommutative,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("left map carries no witness; use the oracle to search for fillers")]
    NoWitness,
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
