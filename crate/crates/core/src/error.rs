use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tetrahedron {0} is a facet quadruple of the hexahedron")]
    BoundaryTet(String),
    #[error("invalid tetrahedron {0:?}: expected 4 distinct labels in 1..=8")]
    InvalidTet(Vec<u8>),
    #[error("duplicate tetrahedron {0}")]
    DuplicateTet(String),
    #[error("triangulation has {0} tetrahedra, expected 1..=18")]
    TetCount(usize),
    #[error("decomposition graph: {0}")]
    Graph(String),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("points {0} are coplanar")]
    Degenerate(String),
    #[error("unknown hexahedron pattern with tetrahedra {0}")]
    UnknownPattern(String),
    #[error("mesh index error: {0}")]
    MeshIndex(String),
    #[error("search budget exhausted after {attempts} attempts")]
    BudgetExhausted { attempts: usize },
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
