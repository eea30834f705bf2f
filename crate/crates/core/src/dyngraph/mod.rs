//! Fixed-topology graph with a lazily materialized weight function.

mod graph;
mod weights;

pub use graph::{ArcData, ArcId, Directedness, Edge, Graph, GraphBuilder, SlotId, VertexId};
pub use weights::{BoxedOracle, EdgeOracle, GraphDelta, TableOracle, WeightModel};
