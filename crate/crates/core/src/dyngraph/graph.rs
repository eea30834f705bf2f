use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Dense vertex index. Stable for the lifetime of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// A directed arc `source -> target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
}

impl Edge {
    pub fn new(source: impl Into<VertexId>, target: impl Into<VertexId>) -> Self {
        Edge {
            source: source.into(),
            target: target.into(),
        }
    }

    pub fn reversed(self) -> Self {
        Edge {
            source: self.target,
            target: self.source,
        }
    }
}

/// Index of an arc in [`Graph::arcs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub u32);

/// Index of an evaluation slot. In undirected graphs both arcs of an edge
/// share one slot, so one evaluation reveals both directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotId(pub u32);

impl ArcId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl SlotId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcData {
    pub source: VertexId,
    pub target: VertexId,
    pub slot: SlotId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Directedness {
    Directed,
    #[default]
    Undirected,
}

/// Explicit graph with fixed topology.
#[derive(Clone, Debug)]
pub struct Graph {
    directedness: Directedness,
    arcs: Vec<ArcData>,
    succ: Vec<Vec<ArcId>>,
    pred: Vec<Vec<ArcId>>,
    // first arc of each slot; the reverse arc (if any) is found through `index`
    slots: Vec<ArcId>,
    index: HashMap<(u32, u32), ArcId>,
}

impl Graph {
    pub fn builder(vertex_count: usize, directedness: Directedness) -> GraphBuilder {
        GraphBuilder {
            graph: Graph {
                directedness,
                arcs: Vec::new(),
                succ: vec![Vec::new(); vertex_count],
                pred: vec![Vec::new(); vertex_count],
                slots: Vec::new(),
                index: HashMap::new(),
            },
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn directedness(&self) -> Directedness {
        self.directedness
    }

    pub fn is_undirected(&self) -> bool {
        self.directedness == Directedness::Undirected
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count() as u32).map(VertexId)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (ArcId, &ArcData)> + '_ {
        self.arcs
            .iter()
            .enumerate()
            .map(|(i, a)| (ArcId(i as u32), a))
    }

    #[inline]
    pub fn arc(&self, id: ArcId) -> &ArcData {
        &self.arcs[id.index()]
    }

    pub fn arc_edge(&self, id: ArcId) -> Edge {
        let a = self.arc(id);
        Edge {
            source: a.source,
            target: a.target,
        }
    }

    #[inline]
    pub fn successors(&self, v: VertexId) -> &[ArcId] {
        &self.succ[v.index()]
    }

    #[inline]
    pub fn predecessors(&self, v: VertexId) -> &[ArcId] {
        &self.pred[v.index()]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.index() < self.vertex_count()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v.0, self.vertex_count()))
        }
    }

    pub fn find_arc(&self, edge: Edge) -> Result<ArcId> {
        self.index
            .get(&(edge.source.0, edge.target.0))
            .copied()
            .ok_or(Error::UnknownEdge(edge.source.0, edge.target.0))
    }

    /// The canonical edge of a slot: the arc that was inserted first.
    pub fn slot_edge(&self, slot: SlotId) -> Edge {
        self.arc_edge(self.slots[slot.index()])
    }

    pub fn slots(&self) -> impl Iterator<Item = SlotId> {
        (0..self.slots.len() as u32).map(SlotId)
    }
}

pub struct GraphBuilder {
    graph: Graph,
}

impl GraphBuilder {
    /// Adds an edge. In undirected mode this inserts both arcs under one slot.
    pub fn add_edge(&mut self, source: VertexId, target: VertexId) -> Result<SlotId> {
        let g = &mut self.graph;
        g.check_vertex(source)?;
        g.check_vertex(target)?;
        if source == target {
            return Err(Error::SelfLoop(source.0));
        }
        if g.index.contains_key(&(source.0, target.0)) {
            return Err(Error::DuplicateEdge(source.0, target.0));
        }
        let slot = SlotId(g.slots.len() as u32);
        let first = self.push_arc(source, target, slot);
        self.graph.slots.push(first);
        if self.graph.is_undirected() {
            self.push_arc(target, source, slot);
        }
        Ok(slot)
    }

    fn push_arc(&mut self, source: VertexId, target: VertexId, slot: SlotId) -> ArcId {
        let g = &mut self.graph;
        let id = ArcId(g.arcs.len() as u32);
        g.arcs.push(ArcData {
            source,
            target,
            slot,
        });
        g.succ[source.index()].push(id);
        g.pred[target.index()].push(id);
        g.index.insert((source.0, target.0), id);
        id
    }

    pub fn build(self) -> Graph {
        self.graph
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undirected_edges_share_a_slot() {
        let mut b = Graph::builder(3, Directedness::Undirected);
        let s = b.add_edge(VertexId(0), VertexId(1)).unwrap();
        b.add_edge(VertexId(1), VertexId(2)).unwrap();
        let g = b.build();
        assert_eq!(g.arc_count(), 4);
        assert_eq!(g.slot_count(), 2);
        let fwd = g.find_arc(Edge::new(0, 1)).unwrap();
        let bwd = g.find_arc(Edge::new(1, 0)).unwrap();
        assert_eq!(g.arc(fwd).slot, s);
        assert_eq!(g.arc(bwd).slot, s);
        assert_eq!(g.slot_edge(s), Edge::new(0, 1));
    }

    #[test]
    fn pred_and_succ_agree() {
        let mut b = Graph::builder(4, Directedness::Directed);
        for (u, v) in [(0, 1), (0, 2), (1, 3), (2, 3), (3, 0)] {
            b.add_edge(VertexId(u), VertexId(v)).unwrap();
        }
        let g = b.build();
        for u in g.vertices() {
            for &a in g.successors(u) {
                let t = g.arc(a).target;
                assert!(g.predecessors(t).contains(&a));
            }
        }
        assert!(g.find_arc(Edge::new(1, 0)).is_err());
    }

    #[test]
    fn rejects_bad_edges() {
        let mut b = Graph::builder(2, Directedness::Undirected);
        assert!(matches!(
            b.add_edge(VertexId(0), VertexId(0)),
            Err(Error::SelfLoop(0))
        ));
        assert!(b.add_edge(VertexId(0), VertexId(5)).is_err());
        b.add_edge(VertexId(0), VertexId(1)).unwrap();
        assert!(matches!(
            b.add_edge(VertexId(1), VertexId(0)),
            Err(Error::DuplicateEdge(1, 0))
        ));
    }
}
