use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("surd {0} is a rational square")]
    SplitSurd(String),
    #[error("surd must be positive, got {0}")]
    NonPositiveSurd(String),
    #[error("elements over different quadratic fields: sqrt({0}) vs sqrt({1})")]
    MixedSurd(String, String),
    #[error("quaternions belong to different algebras")]
    AlgebraMismatch,
    #[error("algebra parameters must be nonzero")]
    ZeroParameter,
    #[error("reciprocity violated: {0}")]
    ReciprocityViolation(String),
    #[error("search exhausted at height bound {0}")]
    SearchExhausted(u32),
    #[error("algebra is not an indefinite division algebra: {0}")]
    NotIndefinite(String),
    #[error("order requires integral parameters, got ({0}, {1})")]
    NonIntegralParameters(String, String),
    #[error("basis does not span a multiplicatively closed lattice: {0}")]
    NotAnOrder(String),
    #[error("congruence level must be at least 3, got {0}")]
    LevelTooSmall(u32),
    #[error("decomposition violated: {0}")]
    DecompositionViolation(String),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("congruence subgroup search produced no nontrivial generators")]
    EmptyGroup,
    #[error("alternating form is degenerate")]
    DegenerateForm,
    #[error("form is not alternating or not integral: {0}")]
    NotAlternating(String),
    #[error("form takes irrational value {0} on the lattice")]
    IrrationalForm(String),
    #[error("Pi_2' is singular at tau = {0}")]
    SingularPi2(String),
    #[error("Riemann relations violated: {0}")]
    RiemannViolation(String),
    #[error("action does not preserve the lattice: {0}")]
    NotLatticeStable(String),
    #[error("C Pi + D is singular")]
    SingularBlock,
    #[error("invalid family data: {0}")]
    InvalidFamily(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("integer {0} too large to factor by trial division")]
    TooLarge(String),
    #[error("json: {0}")]
    Json(String),
}

impl Error {
    /// Stable machine-readable identifier used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "SingularMatrix",
            Error::NotSymmetric => "NotSymmetric",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SplitSurd(_) => "SplitSurd",
            Error::NonPositiveSurd(_) => "NonPositiveSurd",
            Error::MixedSurd(..) => "MixedSurd",
            Error::AlgebraMismatch => "AlgebraMismatch",
            Error::ZeroParameter => "ZeroParameter",
            Error::ReciprocityViolation(_) => "ReciprocityViolation",
            Error::SearchExhausted(_) => "SearchExhausted",
            Error::NotIndefinite(_) => "NotIndefinite",
            Error::NonIntegralParameters(..) => "NonIntegralParameters",
            Error::NotAnOrder(_) => "NotAnOrder",
            Error::LevelTooSmall(_) => "LevelTooSmall",
            Error::DecompositionViolation(_) => "DecompositionViolation",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::EmptyGroup => "EmptyGroup",
            Error::DegenerateForm => "DegenerateForm",
            Error::NotAlternating(_) => "NotAlternating",
            Error::IrrationalForm(_) => "IrrationalForm",
            Error::SingularPi2(_) => "SingularPi2",
            Error::RiemannViolation(_) => "RiemannViolation",
            Error::NotLatticeStable(_) => "NotLatticeStable",
            Error::SingularBlock => "SingularBlock",
            Error::InvalidFamily(_) => "InvalidFamily",
            Error::InvalidInput(_) => "InvalidInput",
            Error::TooLarge(_) => "TooLarge",
            Error::Json(_) => "Json",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
