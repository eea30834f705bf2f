use std::sync::Arc;

use super::graph::{ArcId, Edge, Graph, SlotId, VertexId};
use crate::error::{Error, Result};

/// The expensive true-weight function.
///
/// Must be deterministic between two announced graph changes. Returns a
/// strictly positive cost or `f64::INFINITY` for an infeasible edge.
pub trait EdgeOracle {
    fn cost(&self, slot: SlotId, edge: Edge) -> f64;
}

impl<F> EdgeOracle for F
where
    F: Fn(SlotId, Edge) -> f64,
{
    fn cost(&self, slot: SlotId, edge: Edge) -> f64 {
        self(slot, edge)
    }
}

/// Oracle backed by a per-slot cost table.
#[derive(Clone, Debug)]
pub struct TableOracle {
    pub costs: Arc<Vec<f64>>,
}

impl TableOracle {
    pub fn new(costs: Vec<f64>) -> Self {
        TableOracle {
            costs: Arc::new(costs),
        }
    }
}

impl EdgeOracle for TableOracle {
    fn cost(&self, slot: SlotId, _edge: Edge) -> f64 {
        self.costs[slot.index()]
    }
}

pub type BoxedOracle = Box<dyn EdgeOracle + Send>;

/// Edges whose true weight changed since the last announcement.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphDelta {
    pub changed: Vec<Edge>,
}

impl GraphDelta {
    pub fn new(changed: Vec<Edge>) -> Self {
        GraphDelta { changed }
    }

    pub fn is_empty(&self) -> bool {
        self.changed.is_empty()
    }

    pub fn len(&self) -> usize {
        self.changed.len()
    }
}

/// Heuristic weights, the true-weight oracle and the evaluation ledger.
///
/// The lazy weight of an edge is its cached true cost once evaluated and the
/// inflated heuristic weight otherwise. Only [`WeightModel::evaluate`] ever
/// calls the oracle on behalf of a planner.
pub struct WeightModel {
    graph: Arc<Graph>,
    heuristic: Vec<f64>,
    cache: Vec<Option<f64>>,
    evaluated: usize,
    eval_counter: u64,
    inflation: f64,
    oracle: BoxedOracle,
    log: Vec<SlotId>,
}

impl std::fmt::Debug for WeightModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeightModel")
            .field("slots", &self.heuristic.len())
            .field("evaluated", &self.evaluated)
            .field("eval_counter", &self.eval_counter)
            .field("inflation", &self.inflation)
            .finish()
    }
}

impl WeightModel {
    /// `heuristic` holds one weight per slot of `graph`.
    pub fn new(graph: Arc<Graph>, heuristic: Vec<f64>, oracle: BoxedOracle) -> Result<Self> {
        if heuristic.len() != graph.slot_count() {
            return Err(Error::Config(format!(
                "expected {} heuristic weights, got {}",
                graph.slot_count(),
                heuristic.len()
            )));
        }
        for slot in graph.slots() {
            let w = heuristic[slot.index()];
            if !(w > 0.0 && w.is_finite()) {
                let e = graph.slot_edge(slot);
                return Err(Error::InvalidWeight {
                    source_id: e.source.0,
                    target_id: e.target.0,
                    value: w,
                    reason: "heuristic weights must be positive and finite",
                });
            }
        }
        let slots = graph.slot_count();
        Ok(WeightModel {
            graph,
            heuristic,
            cache: vec![None; slots],
            evaluated: 0,
            eval_counter: 0,
            inflation: 1.0,
            oracle,
            log: Vec::new(),
        })
    }

    pub fn from_fn(
        graph: Arc<Graph>,
        heuristic: impl Fn(Edge) -> f64,
        oracle: BoxedOracle,
    ) -> Result<Self> {
        let h = graph
            .slots()
            .map(|s| heuristic(graph.slot_edge(s)))
            .collect();
        Self::new(graph, h, oracle)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn inflation(&self) -> f64 {
        self.inflation
    }

    pub fn set_inflation(&mut self, inflation: f64) -> Result<()> {
        if !(inflation >= 1.0 && inflation.is_finite()) {
            return Err(Error::Config(format!(
                "inflation must be a finite value >= 1, got {inflation}"
            )));
        }
        self.inflation = inflation;
        Ok(())
    }

    /// Replaces the oracle, e.g. when the world changes. Announce the change
    /// with [`WeightModel::apply_delta`] afterwards.
    pub fn set_oracle(&mut self, oracle: BoxedOracle) {
        self.oracle = oracle;
    }

    #[inline]
    pub fn lazy_slot(&self, slot: SlotId) -> f64 {
        match self.cache[slot.index()] {
            Some(w) => w,
            None => self.inflation * self.heuristic[slot.index()],
        }
    }

    #[inline]
    pub fn lazy_arc(&self, arc: ArcId) -> f64 {
        self.lazy_slot(self.graph.arc(arc).slot)
    }

    pub fn lazy_weight(&self, edge: Edge) -> Result<f64> {
        Ok(self.lazy_arc(self.graph.find_arc(edge)?))
    }

    #[inline]
    pub fn heuristic_slot(&self, slot: SlotId) -> f64 {
        self.heuristic[slot.index()]
    }

    pub fn heuristic(&self, edge: Edge) -> Result<f64> {
        let arc = self.graph.find_arc(edge)?;
        Ok(self.heuristic_slot(self.graph.arc(arc).slot))
    }

    #[inline]
    pub fn is_slot_evaluated(&self, slot: SlotId) -> bool {
        self.cache[slot.index()].is_some()
    }

    #[inline]
    pub fn is_arc_evaluated(&self, arc: ArcId) -> bool {
        self.is_slot_evaluated(self.graph.arc(arc).slot)
    }

    pub fn is_evaluated(&self, edge: Edge) -> Result<bool> {
        Ok(self.is_arc_evaluated(self.graph.find_arc(edge)?))
    }

    pub fn cached(&self, slot: SlotId) -> Option<f64> {
        self.cache[slot.index()]
    }

    pub fn evaluate(&mut self, edge: Edge) -> Result<f64> {
        let arc = self.graph.find_arc(edge)?;
        self.evaluate_arc(arc)
    }

    pub fn evaluate_arc(&mut self, arc: ArcId) -> Result<f64> {
        self.evaluate_slot(self.graph.arc(arc).slot)
    }

    /// Returns the true cost of a slot, calling the oracle only on the first
    /// evaluation since the slot last entered the ledger.
    pub fn evaluate_slot(&mut self, slot: SlotId) -> Result<f64> {
        if let Some(w) = self.cache[slot.index()] {
            return Ok(w);
        }
        let edge = self.graph.slot_edge(slot);
        let w = checked_cost(edge, self.oracle.cost(slot, edge))?;
        self.cache[slot.index()] = Some(w);
        self.evaluated += 1;
        self.eval_counter += 1;
        self.log.push(slot);
        Ok(w)
    }

    /// Queries the oracle without touching the ledger or the counter. Used by
    /// harness-side checks that must not be billed to a planner.
    pub fn peek_true_cost(&self, slot: SlotId) -> Result<f64> {
        let edge = self.graph.slot_edge(slot);
        checked_cost(edge, self.oracle.cost(slot, edge))
    }

    /// Resolves a delta to its distinct slots, in first-mention order.
    pub fn delta_slots(&self, delta: &GraphDelta) -> Result<Vec<SlotId>> {
        let mut seen = vec![false; self.graph.slot_count()];
        let mut out = Vec::new();
        for &e in &delta.changed {
            let slot = self.graph.arc(self.graph.find_arc(e)?).slot;
            if !std::mem::replace(&mut seen[slot.index()], true) {
                out.push(slot);
            }
        }
        Ok(out)
    }

    /// Reverts every changed edge to its heuristic weight without consulting
    /// the oracle. Returns the vertices whose rhs must be recomputed.
    pub fn apply_delta(&mut self, delta: &GraphDelta) -> Result<Vec<VertexId>> {
        let slots = self.delta_slots(delta)?;
        for &slot in &slots {
            if self.cache[slot.index()].take().is_some() {
                self.evaluated -= 1;
            }
        }
        let mut seen = vec![false; self.graph.vertex_count()];
        let mut affected = Vec::new();
        let mut push = |v: VertexId| {
            if !std::mem::replace(&mut seen[v.index()], true) {
                affected.push(v);
            }
        };
        for &e in &delta.changed {
            push(e.target);
            if self.graph.is_undirected() {
                push(e.source);
            }
        }
        Ok(affected)
    }

    /// Number of slots currently in the ledger.
    pub fn ledger_len(&self) -> usize {
        self.evaluated
    }

    /// Number of oracle calls since construction or the last counter reset.
    pub fn eval_count(&self) -> u64 {
        self.eval_counter
    }

    pub fn reset_counter(&mut self) {
        self.eval_counter = 0;
    }

    /// Empties the ledger. The counter keeps running.
    pub fn clear_ledger(&mut self) {
        self.cache.iter_mut().for_each(|c| *c = None);
        self.evaluated = 0;
    }

    /// Slots evaluated since the last call.
    pub fn take_log(&mut self) -> Vec<SlotId> {
        std::mem::take(&mut self.log)
    }

    pub fn evaluated_slots(&self) -> impl Iterator<Item = (SlotId, f64)> + '_ {
        self.cache
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|w| (SlotId(i as u32), w)))
    }
}

fn checked_cost(edge: Edge, w: f64) -> Result<f64> {
    if w > 0.0 {
        Ok(w)
    } else {
        Err(Error::InvalidWeight {
            source_id: edge.source.0,
            target_id: edge.target.0,
            value: w,
            reason: "oracle costs must be positive or +inf",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyngraph::Directedness;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn line(n: u32, dir: Directedness) -> Arc<Graph> {
        let mut b = Graph::builder(n as usize, dir);
        for v in 0..n - 1 {
            b.add_edge(VertexId(v), VertexId(v + 1)).unwrap();
        }
        Arc::new(b.build())
    }

    #[test]
    fn lazy_weight_before_and_after_evaluation() {
        let g = line(2, Directedness::Directed);
        let mut wm = WeightModel::new(g, vec![2.0], Box::new(TableOracle::new(vec![5.0]))).unwrap();
        let e = Edge::new(0, 1);
        assert_eq!(wm.lazy_weight(e).unwrap(), 2.0);
        wm.set_inflation(1.5).unwrap();
        assert_eq!(wm.lazy_weight(e).unwrap(), 3.0);
        assert_eq!(wm.evaluate(e).unwrap(), 5.0);
        assert_eq!(wm.lazy_weight(e).unwrap(), 5.0);
        assert!(wm.lazy_weight(Edge::new(1, 0)).is_err());
    }

    #[test]
    fn evaluate_is_idempotent_and_counts_oracle_calls() {
        let calls = Arc::new(AtomicUsize::new(0));
        let c = calls.clone();
        let g = line(2, Directedness::Undirected);
        let mut wm = WeightModel::new(
            g,
            vec![1.0],
            Box::new(move |_: SlotId, _: Edge| {
                c.fetch_add(1, Ordering::SeqCst);
                f64::INFINITY
            }),
        )
        .unwrap();
        assert_eq!(wm.evaluate(Edge::new(0, 1)).unwrap(), f64::INFINITY);
        assert_eq!(wm.eval_count(), 1);
        // reverse arc shares the slot
        assert_eq!(wm.evaluate(Edge::new(1, 0)).unwrap(), f64::INFINITY);
        assert_eq!(wm.eval_count(), 1);
        assert_eq!(calls.load(Ordering::SeqCst), 1);
        assert!(wm.is_evaluated(Edge::new(1, 0)).unwrap());
    }

    #[test]
    fn delta_reverts_to_heuristic_without_oracle_calls() {
        let g = line(3, Directedness::Undirected);
        let mut wm = WeightModel::new(
            g,
            vec![2.0, 1.0],
            Box::new(TableOracle::new(vec![f64::INFINITY, 1.0])),
        )
        .unwrap();
        wm.evaluate(Edge::new(0, 1)).unwrap();
        let before = wm.eval_count();
        let affected = wm
            .apply_delta(&GraphDelta::new(vec![Edge::new(0, 1)]))
            .unwrap();
        assert_eq!(affected, vec![VertexId(1), VertexId(0)]);
        assert_eq!(wm.lazy_weight(Edge::new(0, 1)).unwrap(), 2.0);
        assert_eq!(wm.eval_count(), before);
        assert_eq!(wm.ledger_len(), 0);

        // already unevaluated: ledger untouched, vertex still reported
        let affected = wm
            .apply_delta(&GraphDelta::new(vec![Edge::new(1, 2)]))
            .unwrap();
        assert_eq!(affected, vec![VertexId(2), VertexId(1)]);
        assert_eq!(wm.lazy_weight(Edge::new(1, 2)).unwrap(), 1.0);

        assert!(wm
            .apply_delta(&GraphDelta::new(vec![Edge::new(0, 2)]))
            .is_err());
    }

    #[test]
    fn delta_of_paired_arcs_frees_one_slot_per_edge() {
        let g = line(5, Directedness::Undirected);
        let mut wm =
            WeightModel::new(g, vec![1.0; 4], Box::new(TableOracle::new(vec![1.0; 4]))).unwrap();
        for v in 0..4 {
            wm.evaluate(Edge::new(v, v + 1)).unwrap();
        }
        assert_eq!(wm.ledger_len(), 4);
        // k = 4 arcs covering 2 undirected edges
        let d = GraphDelta::new(vec![
            Edge::new(0, 1),
            Edge::new(1, 0),
            Edge::new(2, 3),
            Edge::new(3, 2),
        ]);
        wm.apply_delta(&d).unwrap();
        assert_eq!(wm.ledger_len(), 2);
    }

    #[test]
    fn diamond_lazy_cost_matches_evaluated_path() {
        // s=0 -> a=1 -> g=3 with oracle costs 1.0 and 2.5
        let mut b = Graph::builder(4, Directedness::Directed);
        for (u, v) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            b.add_edge(VertexId(u), VertexId(v)).unwrap();
        }
        let g = Arc::new(b.build());
        let mut wm = WeightModel::new(
            g,
            vec![1.0; 4],
            Box::new(TableOracle::new(vec![1.0, 3.0, 2.5, 3.0])),
        )
        .unwrap();
        wm.evaluate(Edge::new(0, 1)).unwrap();
        wm.evaluate(Edge::new(1, 3)).unwrap();
        let lazy =
            wm.lazy_weight(Edge::new(0, 1)).unwrap() + wm.lazy_weight(Edge::new(1, 3)).unwrap();
        // hand Dijkstra on the true weights: min(1.0 + 2.5, 3.0 + 3.0) = 3.5
        assert_eq!(lazy, 3.5);
    }

    #[test]
    fn rejects_invalid_weights() {
        let g = line(2, Directedness::Directed);
        assert!(
            WeightModel::new(g.clone(), vec![0.0], Box::new(TableOracle::new(vec![1.0]))).is_err()
        );
        assert!(WeightModel::new(
            g.clone(),
            vec![f64::INFINITY],
            Box::new(TableOracle::new(vec![1.0]))
        )
        .is_err());
        let mut wm =
            WeightModel::new(g, vec![1.0], Box::new(TableOracle::new(vec![f64::NAN]))).unwrap();
        assert!(wm.evaluate(Edge::new(0, 1)).is_err());
        assert!(wm.set_inflation(0.5).is_err());
    }
}
