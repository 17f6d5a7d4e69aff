use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("curve speed is not spacelike: <f',f'> = {0:e}")]
    NonSpacelikeSpeed(f64),

    #[error("adaptive routine did not converge: {0}")]
    NoConvergence(String),

    #[error("stencil [{lo}, {hi}] leaves the domain [{domain_lo}, {domain_hi}]")]
    DomainClip {
        lo: f64,
        hi: f64,
        domain_lo: f64,
        domain_hi: f64,
    },

    #[error("integrand 1/sqrt(1 - m sin^2 t) is singular on [0, {z}] for m = {m}")]
    SingularIntegrand { z: f64, m: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate point ({x}, {y}): {reason}")]
    DegeneratePoint { x: f64, y: f64, reason: String },

    #[error("degenerate angle at ({x}, {y}): sin(theta) = {sin_theta:e}")]
    DegenerateAngle { x: f64, y: f64, sin_theta: f64 },

    #[error("invalid curve pair: {relation} violated by {residual:e} at y = {y}")]
    InvalidCurvePair {
        relation: String,
        residual: f64,
        y: f64,
    },

    #[error("point is not on H2 at y = {y}: <p,p> + 1 = {residual:e}, x3 = {x3}")]
    NotOnH2 { y: f64, residual: f64, x3: f64 },

    #[error("degenerate family parameters: {0}")]
    DegenerateParameters(String),

    #[error("empty or inadmissible domain: {0}")]
    EmptyDomain(String),

    #[error("invalid frame: {relation} violated by {residual:e}")]
    InvalidFrame { relation: String, residual: f64 },

    #[error("invalid constant vectors: {relation} violated by {residual:e}")]
    InvalidConstants { relation: String, residual: f64 },

    #[error("unknown example id `{0}`")]
    UnknownExample(String),

    #[error("invalid specification at `{path}`: {message}")]
    InvalidSpec { path: String, message: String },

    #[error("coordinates are not canonical at ({x}, {y}): |E - 1| = {e_dev:e}, |F| = {f_dev:e}")]
    NotCanonical {
        x: f64,
        y: f64,
        e_dev: f64,
        f_dev: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of a numerical routine rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_) | Error::DegeneratePoint { .. } | Error::SingularIntegrand { .. }
        )
    }
}
