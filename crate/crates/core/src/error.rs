use thiserror::Error;

use crate::dyngraph::VertexId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} is out of range for a graph of {1} vertices")]
    VertexOutOfRange(u32, usize),

    #[error("edge ({0}, {1}) does not exist")]
    UnknownEdge(u32, u32),

    #[error("edge ({0}, {1}) was added twice")]
    DuplicateEdge(u32, u32),

    #[error("self loop on vertex {0}")]
    SelfLoop(u32),

    #[error("invalid weight {value} for edge ({source_id}, {target_id}): {reason}")]
    InvalidWeight {
        source_id: u32,
        target_id: u32,
        value: f64,
        reason: &'static str,
    },

    #[error("heuristic is not consistent on arc ({0}, {1}): h(u) = {2} > w(u, v) + h(v) = {3}")]
    InconsistentHeuristic(u32, u32, f64, f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("backpointer chain from vertex {0} is broken or cyclic")]
    BrokenBackpointers(VertexId),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("planner {planner}, episode {episode}: {source}")]
    Episode {
        planner: String,
        episode: usize,
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
