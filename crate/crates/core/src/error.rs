use thiserror::Error;

/// Morphism classes of a bispan triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassKind {
    /// Maps along which multiplicative pushforward exists.
    F,
    /// Maps along which additive pushforward exists.
    L,
}

impl std::fmt::Display for ClassKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassKind::F => write!(f, "F"),
            ClassKind::L => write!(f, "L"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("assignment has {got} entries but the domain has {expected} elements")]
    AssignmentLength { expected: usize, got: usize },
    #[error("element {at} is sent to {value}, outside a codomain of size {len}")]
    OutOfRange { at: usize, value: usize, len: usize },
    #[error("map is not equivariant at element {at} under group element {g}")]
    NotEquivariant { at: usize, g: usize },
    #[error("objects live over different groups")]
    AmbientMismatch,
    #[error("morphisms are not composable: codomain and domain differ")]
    NotComposable,
    #[error("morphisms do not share a codomain")]
    CodomainMismatch,
    #[error("morphism is missing the {0} class flag")]
    MissingClass(ClassKind),
    #[error("element {element} is not in an object of size {len}")]
    NoSuchElement { element: usize, len: usize },
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("subgroup inclusion violated: {0}")]
    NotContained(String),
    #[error("base object is not a single orbit")]
    NotTransitive,
    #[error("input vector has length {got}, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("grid bound {bound} cannot certify a degree; at least {needed} is required")]
    BoundTooSmall { bound: usize, needed: usize },
    #[error("degree decompositions disagree: {0}")]
    DegreeMismatch(String),
    #[error("search budget exhausted before a decision was reached")]
    SearchExhausted,
    #[error("arithmetic overflow in {0}")]
    Overflow(String),
    #[error("inconsistent Burnside data: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
