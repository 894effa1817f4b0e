use thiserror::Error;

/// Errors raised by the library. Validation failures and precondition
/// failures are kept apart so that front ends can map them to distinct exit
/// codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty simplex")]
    EmptySimplex,
    #[error("vertex `{0}` appears twice in one simplex")]
    DuplicateVertex(String),
    #[error("vertex `{0}` declared twice")]
    DuplicateVertexName(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("`{0}` is not a simplex of the host complex")]
    UnknownSimplex(String),
    #[error("objects live on different complexes")]
    HostMismatch,
    #[error("vertex map is not simplicial: image of {0} spans no simplex")]
    NotSimplicial(String),
    #[error("vertex map assigns {got} vertices, expected {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("chain-map law fails in dimension {0}")]
    NotChainMap(usize),
    #[error("expected a chain endomorphism")]
    NotEndomorphism,
    #[error("function has {got} cell values, host has {expected} cells")]
    ValueLength { expected: usize, got: usize },
    #[error("{op} requires a map presented without subdivision")]
    RequiresDepthZero { op: &'static str },
    #[error("set is not invariant: image of {0} leaves it")]
    NotInvariant(String),
    #[error("map is not a simplicial isomorphism")]
    NotIsomorphism,
    #[error("function is not constant on the product cell {0}")]
    NotCellCompatible(String),
    #[error("supports do not share a common nonzero Lefschetz number")]
    NoCommonLambda,
    #[error("counting integral {integral} is not a multiple of {n}")]
    NonIntegralCount { integral: String, n: String },
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
}

impl Error {
    /// True for failures of a mathematical precondition (non-invariant set,
    /// missing common Lefschetz number, ...) as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotInvariant(_)
                | Error::NotIsomorphism
                | Error::NoCommonLambda
                | Error::NonIntegralCount { .. }
                | Error::RequiresDepthZero { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
