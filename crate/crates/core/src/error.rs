use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} is capped at k <= {cap}, got k = {k}")]
    CapExceeded { what: &'static str, k: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has a non-integer entry at ({row}, {col})")]
    NonIntegerEntry { row: usize, col: usize },

    #[error("partition is not equitable: cell {from} -> cell {to} has neighbour counts {counts:?}")]
    NotEquitable { from: usize, to: usize, counts: Vec<usize> },

    #[error("vertex set is not a coclique: {0} and {1} are adjacent")]
    NotIndependent(usize, usize),

    #[error("coclique search stopped after {nodes} nodes; best coclique found has size {}", best.len())]
    SearchTimeout { nodes: u64, best: Vec<usize> },

    #[error("module labelling failed: {0}")]
    Labelling(String),

    #[error("certificate failure: {0}")]
    Certificate(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn check_cap(what: &'static str, k: usize, cap: usize) -> crate::Result<()> {
        if k > cap {
            Err(Error::CapExceeded { what, k, cap })
        } else {
            Ok(())
        }
    }
}
