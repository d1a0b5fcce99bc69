use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Domain(String),

    #[error("cannot normalize: f(0) = 0")]
    UnsatisfiableNormalization,

    #[error("singular evaluation at ({re}, {im})")]
    SingularEvaluation { re: f64, im: f64 },

    #[error("evaluation outside the open unit disc (|z| = {modulus})")]
    OutsideDisc { modulus: f64 },

    #[error("unsupported function family: {0}")]
    UnsupportedFamily(String),

    #[error("integrand is not finite at ({re}, {im})")]
    NonFiniteIntegrand { re: f64, im: f64 },

    /// |f| on the contour fell below the relative floor; perturb the contour.
    #[error("zero too close to contour: min |f| = {min_modulus:e}, scale = {scale:e}")]
    ContourTooClose { min_modulus: f64, scale: f64 },

    #[error("argument-principle integral is not near an integer (got {0})")]
    NonIntegralWinding(f64),

    #[error("weight is not smooth near ({re}, {im})")]
    NonSmoothPoint { re: f64, im: f64 },

    #[error("scenario rejected: {0}")]
    ScenarioRejected(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn rejected(msg: impl Into<String>) -> Self {
        Error::ScenarioRejected(msg.into())
    }

    pub(crate) fn singular(z: crate::Complex) -> Self {
        Error::SingularEvaluation { re: z.re, im: z.im }
    }
}
