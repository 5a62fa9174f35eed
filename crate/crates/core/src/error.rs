use std::path::PathBuf;

use thiserror::Error;

use crate::topology::NodeId;

/// Errors produced by the simulator library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("node {0} is alive")]
    NodeAlive(NodeId),

    #[error("node {0} has failed")]
    NodeFailed(NodeId),

    #[error("graph has no live nodes")]
    EmptyGraph,

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("generator could not produce a connected graph after {0} attempts")]
    Disconnected(usize),

    #[error("no reference point within {budget} rounds")]
    NonConvergence { budget: u32, partial: Vec<u32> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
