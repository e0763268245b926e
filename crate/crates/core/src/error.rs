use thiserror::Error;

/// Failures raised by the numerical routines.
///
/// Every variant maps onto one of two broad classes, see [`Error::is_numerical`]:
/// invalid input (the caller asked for something undefined) or numerical
/// breakdown (the float backend could not deliver the requested accuracy).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("f(0) = 0: optimal approximants require a function that does not vanish at the origin")]
    ZeroAtOrigin,

    #[error("cannot reflect a polynomial of degree {degree} at order {order}")]
    InvalidReflectionDegree { degree: usize, order: usize },

    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    #[error("alpha = {alpha} is not supported by {operation}")]
    UnsupportedAlpha { alpha: f64, operation: &'static str },

    #[error(
        "Gram matrix is ill-conditioned (condition estimate {estimate:.3e}); use the exact backend or a lower degree"
    )]
    IllConditioned { estimate: f64 },

    #[error("loss of orthogonality (residual {residual:.3e}); use the exact backend or a lower degree")]
    Instability { residual: f64 },

    #[error("Levinson recursion broke down at step {step}: |gamma| = {modulus}")]
    Breakdown { step: usize, modulus: f64 },

    #[error("division by zero in {0}")]
    DivisionDegenerate(&'static str),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid function specification: {0}")]
    SpecValidation(String),

    #[error("z = 1 is a removable singularity of the quotient form; evaluate the coefficient form instead")]
    RemovableSingularity,
}

impl Error {
    /// True for failures caused by floating point conditioning rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::IllConditioned { .. } | Error::Instability { .. } | Error::Breakdown { .. }
        )
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroAtOrigin => "zero-at-origin",
            Error::InvalidReflectionDegree { .. } => "invalid-reflection-degree",
            Error::BackendMismatch(_) => "backend-mismatch",
            Error::UnsupportedAlpha { .. } => "unsupported-alpha",
            Error::IllConditioned { .. } => "conditioning",
            Error::Instability { .. } => "instability",
            Error::Breakdown { .. } => "breakdown",
            Error::DivisionDegenerate(_) => "division-degenerate",
            Error::Degenerate(_) => "degenerate",
            Error::SpecValidation(_) => "spec-validation",
            Error::RemovableSingularity => "removable-singularity",
        }
    }

    /// Library module that raises the variant.
    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidReflectionDegree { .. } => "series",
            Error::BackendMismatch(_) => "dalpha",
            Error::ZeroAtOrigin | Error::IllConditioned { .. } => "approximant",
            Error::Instability { .. } => "orthopoly",
            Error::Breakdown { .. } => "levinson",
            Error::UnsupportedAlpha { .. } | Error::DivisionDegenerate(_) => "kernel",
            Error::Degenerate(_) => "roots",
            Error::SpecValidation(_) | Error::RemovableSingularity => "families",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
