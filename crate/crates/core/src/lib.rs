//! Lifelong lazy replanning on graphs whose edge weights are expensive to
//! evaluate and change over time.
//!
//! A lazily weighted LPA* tree repairs inconsistencies left by graph changes
//! and by edge evaluations, while edge evaluations stay confined to the
//! subpaths the tree proposes. Baselines (eager LPA*, from-scratch lazy
//! search, A*, Dijkstra) and a 2D benchmark harness live alongside.

pub mod baselines;
pub mod bench;
pub mod dyngraph;
pub mod error;
pub mod events;
pub mod planner;
pub mod queue;
pub mod search_tree;
pub mod verify;

pub use dyngraph::{
    Directedness, Edge, EdgeOracle, Graph, GraphDelta, SlotId, VertexId, WeightModel,
};
pub use error::{Error, Result};
pub use events::Event;
pub use planner::{Algorithm, EpisodeMetrics, PlanResult, PlanStatus, Planner, PlannerConfig};
