use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("the zero polynomial has no primitive form")]
    ZeroPolynomial,

    #[error("polynomial must have degree at least 1")]
    ConstantPolynomial,

    #[error("both coordinates of the parametrisation are constant")]
    BothConstant,

    #[error("parametrisation has a common zero of both derivatives")]
    SingularParam,

    #[error("parametrisation is not injective")]
    NotProper,

    #[error("degree obstruction: neither {deg_p} nor {deg_q} divides the other")]
    DegreeObstruction { deg_p: usize, deg_q: usize },

    #[error("reduction verification failed: {0}")]
    NotReduced(String),

    #[error("parametrisation does not lie on the curve")]
    ParamMismatch,

    #[error("B = {b} is below the certified threshold B0 = {b0}")]
    BelowThreshold { b: u64, b0: u64 },

    #[error("no certified threshold found below 2^62")]
    ThresholdNotFound,

    #[error("{0} is a perfect square")]
    PerfectSquare(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
