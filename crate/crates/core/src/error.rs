use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 8")]
    InvalidGrid(usize),

    #[error("fields live on different grids (N = {left} vs N = {right})")]
    GridMismatch { left: usize, right: usize },

    #[error("block index {j} outside [-1, {j_max}]")]
    BlockIndex { j: i32, j_max: i32 },

    #[error("invalid integrability/summability index: {0}")]
    InvalidIndex(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("{estimate} is outside its hypotheses: {hypothesis}")]
    Hypothesis {
        estimate: &'static str,
        hypothesis: String,
    },

    #[error("divergence at t = {t}: {what} = {value}")]
    Divergence { t: f64, what: &'static str, value: f64 },

    #[error("fixed-point map did not contract at shift a = {a} after {iterations} iterations (last increment {increment:e})")]
    NonContraction {
        a: f64,
        iterations: usize,
        increment: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
