use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}:{col}: {msg}")]
    Parse { path: PathBuf, line: usize, col: usize, msg: String },
    #[error("unsupported edge weight type {0} (only EUC_2D is accepted)")]
    UnsupportedEdgeWeightType(String),
    #[error("matrix is not square: {rows} rows but row {bad_row} has {cols} entries")]
    NonSquareMatrix { rows: usize, cols: usize, bad_row: usize },
    #[error("matrix is not symmetric at ({0},{1}); use --mode average to symmetrize")]
    AsymmetricMatrix(usize, usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] patrol_core::Error),
}

impl Error {
    pub fn parse(path: &std::path::Path, line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { path: path.to_path_buf(), line, col, msg: msg.into() }
    }

    /// Process exit code: 2 for malformed input files, 3 for well-formed
    /// but infeasible instances, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::UnsupportedEdgeWeightType(_)
            | Error::NonSquareMatrix { .. }
            | Error::AsymmetricMatrix(..) => 2,
            Error::Core(_) => 3,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
