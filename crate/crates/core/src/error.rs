use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants split into two families: malformed input (bad primes, broken
/// matrices, mismatched parents) and violated hypotheses of a structural
/// result (for example asking for the Frobenius bound of a non-Frobenius
/// pair). [`Error::is_hypothesis_violation`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("exponent list contains a non-positive entry")]
    EmptyOrNonPositiveExponent,
    #[error("order {order} exceeds the enumeration bound {bound}")]
    OrderBoundExceeded { order: u128, bound: u128 },
    #[error("element does not belong to the parent group")]
    ParentMismatch,
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("entry ({row},{col}) = {value} is not divisible by {required}")]
    DivisibilityViolation { row: usize, col: usize, value: u64, required: u64 },
    #[error("matrix does not define a bijection")]
    NotBijective,
    #[error("matrix has shape {rows}x{cols}, expected {expected}x{expected}")]
    BadShape { rows: usize, cols: usize, expected: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("action is not a homomorphism: {0}")]
    ActionNotHomomorphism(String),
    #[error("pairs belong to different contexts")]
    ContextMismatch,
    #[error("context declares no character summand")]
    NoCharacterSummandDeclared,
    #[error("action does not preserve the torsion subgroup")]
    ActionDoesNotPreserveTorsion,
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("focal subgroup [P,E] is a proper subgroup of P")]
    FocalNotWhole,
    #[error("inertial group order {order} is divisible by p = {p}")]
    EnotPPrime { order: u64, p: u64 },
    #[error("inertial group is not abelian")]
    EnotAbelian,
    #[error("pair is not Frobenius: {0}")]
    NotFrobenius(String),
    #[error("defect group is not cyclic of order at least 3")]
    NotCyclicDefect,
    #[error("{d} does not divide {order}")]
    BadDivisor { d: u64, order: u64 },
    #[error("inertial group is trivial")]
    TrivialInertialGroup,
    #[error("defect group is trivial")]
    TrivialGroup,
    #[error("maps are not composable at position {0}")]
    NotComposable(usize),
    #[error("diagram shape mismatch at {0}")]
    ShapeMismatch(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("bad cyclic order: {0}")]
    BadCyclicOrder(String),
    #[error("rho∘sigma is not a transitive cycle")]
    NotTransitive,
    #[error("edge permutation stabilises no vertex")]
    NoStabilizedVertex,
    #[error("edge permutation is not a tree automorphism")]
    NotTreeAutomorphism,
}

impl Error {
    /// True for errors signalling that a structural hypothesis does not hold
    /// for otherwise well-formed input.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::FocalNotWhole
                | Error::EnotPPrime { .. }
                | Error::EnotAbelian
                | Error::NotFrobenius(_)
                | Error::NotCyclicDefect
                | Error::BadDivisor { .. }
                | Error::TrivialGroup
                | Error::TrivialInertialGroup
                | Error::NoStabilizedVertex
                | Error::NotTransitive
        )
    }
}
