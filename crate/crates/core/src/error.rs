use crate::symbolic::SymbolicError;

/// Errors raised by geometric constructions. Checks that can fail for
/// mathematical reasons report through [`crate::report::CheckReport`] instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("patch mismatch: expected `{expected}`, found `{found}`")]
    PatchMismatch { expected: String, found: String },
    #[error("interior product of a 0-form")]
    DegreeZero,
    #[error("expected a form of degree {expected}, found degree {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("2-form is not closed; d of it is {0}")]
    NotClosed(String),
    #[error("invalid patch `{patch}`: {reason}")]
    InvalidPatch { patch: String, reason: String },
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("frame drops rank at {0}")]
    NotSmoothSubbundle(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("square does not commute: {0}")]
    SquareDoesNotCommute(String),
    #[error("outer square does not commute: {0}")]
    OuterSquareFails(String),
    #[error("gauge equation fails: residual {0}")]
    GaugeEquationFails(String),
    #[error("prerequisite failed: {0}")]
    PrerequisiteFailed(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("solution is not unique: {0}")]
    NonUnique(String),
    #[error("map is not transverse at {0}")]
    NotTransverse(String),
    #[error("frame does not span: {0}")]
    FrameDoesNotSpan(String),
    #[error("cocycle condition fails: {0}")]
    CocycleFails(String),
    #[error("local forms disagree on an overlap: residual {0}")]
    OverlapMismatch(String),
    #[error("form is not basic: {0}")]
    NotBasic(String),
    #[error("vector is not tangent to the orbit at {0}")]
    NotInOrbitDirection(String),
    #[error("invalid data: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
