use thiserror::Error;

/// Every failure mode of the engine.
///
/// Variants group loosely by the layer that raises them, but callers mostly
/// match on a handful (precision, degeneracy, parse errors) so a single enum
/// keeps propagation with `?` painless across modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // -- fields --
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not an odd prime")]
    NotAPrime(u64),
    #[error("minimal polynomial is reducible over its base")]
    ReducibleModulus,
    #[error("minimal polynomial is not separable")]
    NotSeparable,
    #[error("zero input where a unit is required")]
    ZeroInput,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field is not an extension of the requested base")]
    NotAnExtension,
    #[error("field is infinite or larger than the enumeration bound")]
    InfiniteField,
    #[error("fields do not match")]
    FieldMismatch,
    #[error("coefficient `{0}` is not an element of the field")]
    CoefficientNotInField(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element is not a square in the coefficient field (adjoin a root of {0})")]
    LeadingCoeffNotSquare(String),
    #[error("operation not supported: {0}")]
    Unsupported(String),
    #[error("integer factorization exceeded its work bound")]
    FactorizationLimit,

    // -- parsing --
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    // -- polynomials and linear algebra --
    #[error("system is not square ({polys} polynomials in {vars} variables)")]
    NonSquareSystem { polys: usize, vars: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("matrix is not symmetric")]
    NotSymmetric,

    // -- Grothendieck-Witt --
    #[error("leading term is not a unit")]
    NonUnitLeadingTerm,

    // -- local algebra and degrees --
    #[error("point is not a zero of the system")]
    NotAZero,
    #[error("zero is not isolated (quotient dimension still growing at order {0})")]
    NotIsolated(usize),
    #[error("jacobian element vanishes in the local algebra")]
    JacobianVanishesInAlgebra,
    #[error("jacobian vanishes at the zero; use the EKL form")]
    DegenerateZero,
    #[error("residue field is not separable over the base")]
    InseparableResidueField,
    #[error("characteristic divides the local algebra dimension {0}")]
    CharDividesDimension(usize),
    #[error("EKL Gram matrix is degenerate")]
    DegenerateEkl,
    #[error("numerator and denominator are not coprime")]
    NotCoprime,
    #[error("need deg A > deg B >= 0")]
    DegreeOrder,
    #[error("value is not regular: jacobian vanishes at a fiber point")]
    IrregularValue,
    #[error("fiber escapes the enumeration bound: found {found} of {expected} geometric points")]
    FiberEscapesBound { found: usize, expected: usize },
    #[error("fiber is not finite")]
    FiberNotFinite,

    // -- Milnor numbers --
    #[error("gradient does not vanish: point is smooth")]
    SmoothPoint,
    #[error("point is not a node")]
    NotANode,

    // -- Puiseux branches --
    #[error("seed residual has non-positive valuation")]
    SeedInconsistent,
    #[error("Newton iteration does not converge quadratically: {0}")]
    NoQuadraticConvergence(String),
    #[error("Hessian determinant is not a unit on the branch")]
    NonUnitHessian,
    #[error("branch does not specialize to the singular point")]
    BranchDoesNotSpecialize,
    #[error("two supplied branches coincide")]
    DuplicateBranch,
    #[error("branches account for degree {found} but the Milnor number has rank {expected}")]
    IncompleteBranchSet { found: usize, expected: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax {
        pos,
        msg: msg.into(),
    })
}
