//! Lazy LPA* search tree.
//!
//! Per-vertex `g`, `rhs` and backpointer records over the lazy weight
//! function, repaired incrementally with a lexicographic-key priority queue.
//! Arcs leaving the goal are never relaxed: a simple path to the goal cannot
//! use them, and the search stops at the goal the way A* does.

use std::sync::Arc;

use crate::dyngraph::{ArcId, Graph, VertexId, WeightModel};
use crate::error::{Error, Result};
use crate::events::ExpansionEvent;
pub use crate::queue::{Key, SearchQueue};

const INF: f64 = f64::INFINITY;

/// How rhs computations obtain edge weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightPolicy {
    /// Use the lazy weight; never call the oracle.
    Lazy,
    /// Evaluate every arc an rhs computation reads (zero-step lookahead).
    Eager,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VertexRecord {
    pub g: f64,
    pub rhs: f64,
    pub bp: Option<VertexId>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    /// Backpointer path from the start to the vertex where the search stopped.
    Subpath {
        path: Vec<VertexId>,
        /// True when an event stopped the search at the last vertex.
        triggered: bool,
    },
    NoPath,
}

impl SearchOutcome {
    pub fn path(&self) -> Option<&[VertexId]> {
        match self {
            SearchOutcome::Subpath { path, .. } => Some(path),
            SearchOutcome::NoPath => None,
        }
    }
}

/// `[min(g, rhs) + h; min(g, rhs)]`.
pub fn key_for(g: f64, rhs: f64, h: f64) -> Key {
    let m = g.min(rhs);
    Key::new(m + h, m)
}

/// Checks `h(goal) = 0` and `h(u) <= ŵ(u, v) + h(v)` on every arc, using the
/// uninflated heuristic weights.
pub fn validate_heuristic(weights: &WeightModel, goal: VertexId, h: &[f64]) -> Result<()> {
    let graph = weights.graph();
    if h.len() != graph.vertex_count() {
        return Err(Error::Config(format!(
            "expected {} heuristic values, got {}",
            graph.vertex_count(),
            h.len()
        )));
    }
    if let Some((i, &x)) = h
        .iter()
        .enumerate()
        .find(|(_, x)| !(x.is_finite() && **x >= 0.0))
    {
        return Err(Error::Config(format!("heuristic of vertex {i} is {x}")));
    }
    if h[goal.index()] != 0.0 {
        return Err(Error::Config(format!(
            "heuristic must vanish at the goal, got {}",
            h[goal.index()]
        )));
    }
    for (_, a) in graph.arcs() {
        let rhs = weights.heuristic_slot(a.slot) + h[a.target.index()];
        if h[a.source.index()] > rhs {
            return Err(Error::InconsistentHeuristic(
                a.source.0,
                a.target.0,
                h[a.source.index()],
                rhs,
            ));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SearchTree {
    graph: Arc<Graph>,
    start: VertexId,
    goal: VertexId,
    h: Vec<f64>,
    g: Vec<f64>,
    rhs: Vec<f64>,
    bp: Vec<Option<(VertexId, ArcId)>>,
    queue: SearchQueue,
    policy: WeightPolicy,
    truncation: f64,
    expansions: u64,
    triggers: u64,
    pops: Vec<u32>,
    popped: Vec<VertexId>,
    max_pops: u32,
    expanded_log: Vec<VertexId>,
}

impl SearchTree {
    /// Builds an initialized tree: every record at `∞` except `rhs(start) = 0`,
    /// with the start queued.
    pub fn new(
        weights: &WeightModel,
        start: VertexId,
        goal: VertexId,
        heuristic: Vec<f64>,
        policy: WeightPolicy,
    ) -> Result<Self> {
        let graph = weights.graph().clone();
        graph.check_vertex(start)?;
        graph.check_vertex(goal)?;
        validate_heuristic(weights, goal, &heuristic)?;
        let n = graph.vertex_count();
        let mut tree = SearchTree {
            graph,
            start,
            goal,
            h: heuristic,
            g: vec![INF; n],
            rhs: vec![INF; n],
            bp: vec![None; n],
            queue: SearchQueue::with_vertices(n),
            policy,
            truncation: 1.0,
            expansions: 0,
            triggers: 0,
            pops: vec![0; n],
            popped: Vec::new(),
            max_pops: 0,
            expanded_log: Vec::new(),
        };
        tree.reset();
        Ok(tree)
    }

    /// Forgets all search state. Counters keep running.
    pub fn reset(&mut self) {
        self.g.iter_mut().for_each(|x| *x = INF);
        self.rhs.iter_mut().for_each(|x| *x = INF);
        self.bp.iter_mut().for_each(|x| *x = None);
        self.queue.clear();
        self.rhs[self.start.index()] = 0.0;
        // UpdateVertex(start): the start's rhs is pinned, so only the queue changes
        self.queue
            .insert(self.start, self.calculate_key(self.start));
    }

    pub fn set_truncation(&mut self, truncation: f64) -> Result<()> {
        if !(truncation >= 1.0 && truncation.is_finite()) {
            return Err(Error::Config(format!(
                "truncation must be a finite value >= 1, got {truncation}"
            )));
        }
        self.truncation = truncation;
        Ok(())
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn goal(&self) -> VertexId {
        self.goal
    }

    pub fn policy(&self) -> WeightPolicy {
        self.policy
    }

    pub fn vertex_count(&self) -> usize {
        self.g.len()
    }

    pub fn heuristic(&self, v: VertexId) -> f64 {
        self.h[v.index()]
    }

    pub fn g(&self, v: VertexId) -> f64 {
        self.g[v.index()]
    }

    pub fn rhs(&self, v: VertexId) -> f64 {
        self.rhs[v.index()]
    }

    pub fn backpointer(&self, v: VertexId) -> Option<(VertexId, ArcId)> {
        self.bp[v.index()]
    }

    pub fn record(&self, v: VertexId) -> VertexRecord {
        VertexRecord {
            g: self.g(v),
            rhs: self.rhs(v),
            bp: self.backpointer(v).map(|(u, _)| u),
        }
    }

    pub fn queue(&self) -> &SearchQueue {
        &self.queue
    }

    /// Total pops since construction.
    pub fn expansions(&self) -> u64 {
        self.expansions
    }

    /// Total event triggers since construction.
    pub fn triggers(&self) -> u64 {
        self.triggers
    }

    /// Largest number of pops of a single vertex during the last
    /// `compute_shortest_path` call.
    pub fn max_pops_last_call(&self) -> u32 {
        self.max_pops
    }

    /// Vertices popped since the last call, in pop order.
    pub fn take_expanded_log(&mut self) -> Vec<VertexId> {
        std::mem::take(&mut self.expanded_log)
    }

    /// Arcs `(bp(v), v)` of every vertex with finite `g`.
    pub fn tree_arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.bp
            .iter()
            .enumerate()
            .filter(|(v, _)| self.g[*v].is_finite())
            .filter_map(|(_, bp)| bp.map(|(_, a)| a))
    }

    pub fn calculate_key(&self, v: VertexId) -> Key {
        key_for(self.g(v), self.rhs(v), self.heuristic(v))
    }

    #[cfg(test)]
    pub(crate) fn set_g(&mut self, v: VertexId, g: f64) {
        self.g[v.index()] = g;
    }

    pub fn update_vertex(&mut self, weights: &mut WeightModel, v: VertexId) -> Result<()> {
        if v != self.start {
            let (rhs, bp) = self.best_predecessor(weights, v)?;
            self.rhs[v.index()] = rhs;
            self.bp[v.index()] = bp;
        }
        self.queue.remove(v);
        if self.g(v) != self.rhs(v) {
            self.queue.insert(v, self.calculate_key(v));
        }
        Ok(())
    }

    fn best_predecessor(
        &self,
        weights: &mut WeightModel,
        v: VertexId,
    ) -> Result<(f64, Option<(VertexId, ArcId)>)> {
        let mut best = INF;
        let mut bp: Option<(VertexId, ArcId)> = None;
        for &arc in self.graph.predecessors(v) {
            let u = self.graph.arc(arc).source;
            let gu = self.g(u);
            if u == self.goal || gu == INF {
                continue;
            }
            let w = match self.policy {
                WeightPolicy::Lazy => weights.lazy_arc(arc),
                WeightPolicy::Eager => weights.evaluate_arc(arc)?,
            };
            let cand = gu + w;
            if cand == INF {
                continue;
            }
            let better = match bp {
                None => true,
                Some((b, _)) => cand < best || (cand == best && u < b),
            };
            if better {
                best = cand;
                bp = Some((u, arc));
            }
        }
        Ok((best, bp))
    }

    pub fn compute_shortest_path(
        &mut self,
        weights: &mut WeightModel,
        event: Option<&dyn ExpansionEvent>,
    ) -> Result<SearchOutcome> {
        for v in self.popped.drain(..) {
            self.pops[v.index()] = 0;
        }
        self.max_pops = 0;
        if self.start == self.goal {
            return Ok(SearchOutcome::Subpath {
                path: vec![self.start],
                triggered: false,
            });
        }
        let goal = self.goal;
        loop {
            let top = self.queue.top_key();
            let goal_consistent = self.g(goal) == self.rhs(goal);
            if !top.precedes(&self.calculate_key(goal)) && goal_consistent {
                break;
            }
            if self.truncation > 1.0 && goal_consistent && self.rhs(goal).is_finite() {
                if let Some(path) = self.truncated_goal_path(weights, top) {
                    return Ok(SearchOutcome::Subpath {
                        path,
                        triggered: false,
                    });
                }
            }
            let Some((u, _)) = self.queue.pop() else {
                break;
            };
            self.count_pop(u);
            if self.g(u) > self.rhs(u) {
                self.g[u.index()] = self.rhs(u);
                let fire = event.is_some_and(|e| e.triggered(u, self, weights));
                self.update_successors(weights, u)?;
                if fire {
                    self.triggers += 1;
                    let path = self.extract_path(u)?;
                    return Ok(SearchOutcome::Subpath {
                        path,
                        triggered: true,
                    });
                }
            } else {
                self.g[u.index()] = INF;
                self.update_successors(weights, u)?;
                self.update_vertex(weights, u)?;
            }
        }
        if self.rhs(goal).is_finite() {
            Ok(SearchOutcome::Subpath {
                path: self.extract_path(goal)?,
                triggered: false,
            })
        } else {
            Ok(SearchOutcome::NoPath)
        }
    }

    fn count_pop(&mut self, u: VertexId) {
        self.expansions += 1;
        self.expanded_log.push(u);
        let c = &mut self.pops[u.index()];
        if *c == 0 {
            self.popped.push(u);
        }
        *c += 1;
        self.max_pops = self.max_pops.max(*c);
    }

    fn update_successors(&mut self, weights: &mut WeightModel, u: VertexId) -> Result<()> {
        if u == self.goal {
            return Ok(());
        }
        let graph = self.graph.clone();
        for &arc in graph.successors(u) {
            self.update_vertex(weights, graph.arc(arc).target)?;
        }
        Ok(())
    }

    // The goal's backpointer path, if its lazy cost is within the truncation
    // factor of the queue's lower bound.
    fn truncated_goal_path(&self, weights: &WeightModel, top: Key) -> Option<Vec<VertexId>> {
        let path = self.extract_path(self.goal).ok()?;
        let cost = self.path_lazy_cost(weights, &path).ok()?;
        (cost <= self.truncation * top.k1).then_some(path)
    }

    /// Follows backpointers from `v` back to the start.
    pub fn extract_path(&self, v: VertexId) -> Result<Vec<VertexId>> {
        let mut path = vec![v];
        let mut cur = v;
        while cur != self.start {
            let Some((parent, _)) = self.backpointer(cur) else {
                return Err(Error::BrokenBackpointers(v));
            };
            path.push(parent);
            if path.len() > self.vertex_count() {
                return Err(Error::BrokenBackpointers(v));
            }
            cur = parent;
        }
        path.reverse();
        Ok(path)
    }

    /// Sum of lazy weights along consecutive vertices of `path`.
    pub fn path_lazy_cost(&self, weights: &WeightModel, path: &[VertexId]) -> Result<f64> {
        path.windows(2).try_fold(0.0, |acc, w| {
            let arc = self.graph.find_arc(crate::dyngraph::Edge {
                source: w[0],
                target: w[1],
            })?;
            Ok(acc + weights.lazy_arc(arc))
        })
    }

    /// Full sweep of the record invariants: pinned start, rhs and
    /// backpointer equal to the lazy argmin over predecessors, and queue
    /// membership exactly where `g != rhs` with an up-to-date key.
    pub fn check_invariants(&self, weights: &WeightModel) -> Result<()> {
        let s = self.start;
        if self.rhs(s) != 0.0 || self.bp[s.index()].is_some() {
            return Err(Error::Invariant(format!(
                "start record drifted: rhs = {}, bp = {:?}",
                self.rhs(s),
                self.bp[s.index()]
            )));
        }
        for v in self.graph.vertices() {
            if v != s {
                let mut best = INF;
                let mut bp = None;
                for &arc in self.graph.predecessors(v) {
                    let u = self.graph.arc(arc).source;
                    if u == self.goal || self.g(u) == INF {
                        continue;
                    }
                    let cand = self.g(u) + weights.lazy_arc(arc);
                    if cand == INF {
                        continue;
                    }
                    if bp.is_none_or(|b| cand < best || (cand == best && u < b)) {
                        best = cand;
                        bp = Some(u);
                    }
                }
                if best != self.rhs(v) || bp != self.backpointer(v).map(|(u, _)| u) {
                    return Err(Error::Invariant(format!(
                        "vertex {v}: rhs = {} bp = {:?}, recomputed rhs = {best} bp = {bp:?}",
                        self.rhs(v),
                        self.backpointer(v)
                    )));
                }
            }
            let inconsistent = self.g(v) != self.rhs(v);
            match self.queue.key_of(v) {
                Some(k) if !inconsistent => {
                    return Err(Error::Invariant(format!(
                        "consistent vertex {v} is queued with key {k:?}"
                    )))
                }
                None if inconsistent => {
                    return Err(Error::Invariant(format!(
                        "inconsistent vertex {v} (g = {}, rhs = {}) is not queued",
                        self.g(v),
                        self.rhs(v)
                    )))
                }
                Some(k) if k != self.calculate_key(v) => {
                    return Err(Error::Invariant(format!(
                        "vertex {v} queued with stale key {k:?}"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyngraph::{Directedness, Edge, TableOracle};
    use crate::events::Event;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    // s=0, a=1, b=2, g=3; arcs s->a, s->b, a->g, b->g
    fn diamond(heuristic: Vec<f64>, truth: Vec<f64>) -> WeightModel {
        let mut b = Graph::builder(4, Directedness::Directed);
        for (u, w) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            b.add_edge(v(u), v(w)).unwrap();
        }
        WeightModel::new(
            Arc::new(b.build()),
            heuristic,
            Box::new(TableOracle::new(truth)),
        )
        .unwrap()
    }

    #[test]
    fn calculate_key_examples() {
        assert_eq!(key_for(INF, 0.0, 7.0), Key::new(7.0, 0.0));
        assert_eq!(key_for(INF, INF, 3.0), Key::INFINITE);
        assert_eq!(key_for(4.0, 6.0, 3.0), Key::new(7.0, 4.0));
    }

    #[test]
    fn start_is_queued_on_initialization() {
        let wm = diamond(vec![1.0; 4], vec![1.0; 4]);
        let tree = SearchTree::new(&wm, v(0), v(3), vec![0.0; 4], WeightPolicy::Lazy).unwrap();
        assert_eq!(
            tree.record(v(0)),
            VertexRecord {
                g: INF,
                rhs: 0.0,
                bp: None
            }
        );
        assert_eq!(tree.queue().key_of(v(0)), Some(Key::new(0.0, 0.0)));
        tree.check_invariants(&wm).unwrap();
    }

    #[test]
    fn update_vertex_unreachable_and_start_guard() {
        let mut wm = diamond(vec![1.0; 4], vec![1.0; 4]);
        let mut tree = SearchTree::new(&wm, v(0), v(3), vec![0.0; 4], WeightPolicy::Lazy).unwrap();
        tree.update_vertex(&mut wm, v(3)).unwrap();
        assert_eq!(
            tree.record(v(3)),
            VertexRecord {
                g: INF,
                rhs: INF,
                bp: None
            }
        );
        assert!(!tree.queue().contains(v(3)));
        tree.update_vertex(&mut wm, v(0)).unwrap();
        assert_eq!(tree.rhs(v(0)), 0.0);
    }

    #[test]
    fn update_vertex_picks_lazy_argmin() {
        // preds a (g=1, w=1) and b (g=1, w=3) of the goal
        let mut wm = diamond(vec![1.0, 1.0, 1.0, 3.0], vec![1.0; 4]);
        let h = vec![0.0; 4];
        let mut tree = SearchTree::new(&wm, v(0), v(3), h, WeightPolicy::Lazy).unwrap();
        tree.set_g(v(1), 1.0);
        tree.set_g(v(2), 1.0);
        tree.update_vertex(&mut wm, v(3)).unwrap();
        assert_eq!(tree.rhs(v(3)), 2.0);
        assert_eq!(tree.record(v(3)).bp, Some(v(1)));
        assert_eq!(tree.queue().key_of(v(3)), Some(Key::new(2.0, 2.0)));
    }

    #[test]
    fn start_equal_goal_needs_no_pops() {
        let mut wm = diamond(vec![1.0; 4], vec![1.0; 4]);
        let mut tree = SearchTree::new(&wm, v(0), v(0), vec![0.0; 4], WeightPolicy::Lazy).unwrap();
        let out = tree
            .compute_shortest_path(&mut wm, Some(&Event::ShortestPath))
            .unwrap();
        assert_eq!(out.path(), Some(&[v(0)][..]));
        assert_eq!(tree.expansions(), 0);
    }

    #[test]
    fn diamond_shortest_path_event_returns_lazy_optimum() {
        let mut wm = diamond(vec![1.0; 4], vec![1.0; 4]);
        let mut tree = SearchTree::new(&wm, v(0), v(3), vec![0.0; 4], WeightPolicy::Lazy).unwrap();
        let out = tree
            .compute_shortest_path(&mut wm, Some(&Event::ShortestPath))
            .unwrap();
        let path = out.path().unwrap().to_vec();
        // both routes cost 2; tie goes to the smaller predecessor id
        assert_eq!(path, vec![v(0), v(1), v(3)]);
        assert_eq!(tree.path_lazy_cost(&wm, &path).unwrap(), 2.0);
        assert_eq!(tree.g(v(3)), 2.0);
        assert_eq!(tree.triggers(), 1);
        assert_eq!(wm.eval_count(), 0);
        tree.check_invariants(&wm).unwrap();
    }

    #[test]
    fn all_routes_blocked_gives_no_path() {
        // s=0, m=1, g=2 with s->g and s->m->g
        let mut b = Graph::builder(3, Directedness::Directed);
        for (x, y) in [(0, 2), (0, 1), (1, 2)] {
            b.add_edge(v(x), v(y)).unwrap();
        }
        let mut wm = WeightModel::new(
            Arc::new(b.build()),
            vec![1.0; 3],
            Box::new(TableOracle::new(vec![INF, 1.0, INF])),
        )
        .unwrap();
        wm.evaluate(Edge::new(0, 2)).unwrap();
        wm.evaluate(Edge::new(1, 2)).unwrap();
        let mut tree = SearchTree::new(&wm, v(0), v(2), vec![0.0; 3], WeightPolicy::Lazy).unwrap();
        let out = tree
            .compute_shortest_path(&mut wm, Some(&Event::ShortestPath))
            .unwrap();
        assert_eq!(out, SearchOutcome::NoPath);
        tree.check_invariants(&wm).unwrap();
    }

    #[test]
    fn extract_path_reads_backpointers() {
        let mut wm = diamond(vec![1.0; 4], vec![1.0; 4]);
        let mut tree = SearchTree::new(&wm, v(0), v(3), vec![0.0; 4], WeightPolicy::Lazy).unwrap();
        assert_eq!(tree.extract_path(v(0)).unwrap(), vec![v(0)]);
        assert!(matches!(
            tree.extract_path(v(3)),
            Err(Error::BrokenBackpointers(_))
        ));
        tree.compute_shortest_path(&mut wm, None).unwrap();
        let p = tree.extract_path(v(3)).unwrap();
        assert_eq!(p, vec![v(0), v(1), v(3)]);
        assert_eq!(tree.path_lazy_cost(&wm, &p).unwrap(), tree.g(v(3)));
    }

    #[test]
    fn eager_policy_evaluates_arcs_it_reads() {
        let mut wm = diamond(vec![1.0; 4], vec![1.0, 1.0, 1.0, 1.0]);
        let mut tree = SearchTree::new(&wm, v(0), v(3), vec![0.0; 4], WeightPolicy::Eager).unwrap();
        tree.compute_shortest_path(&mut wm, None).unwrap();
        // pops s, a, b, g; relaxes s->a, s->b, a->g, b->g
        assert_eq!(wm.eval_count(), 4);
        assert_eq!(tree.expansions(), 4);
    }

    #[test]
    fn rejects_inconsistent_heuristic() {
        let wm = diamond(vec![1.0; 4], vec![1.0; 4]);
        let err = SearchTree::new(
            &wm,
            v(0),
            v(3),
            vec![0.0, 5.0, 0.0, 0.0],
            WeightPolicy::Lazy,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InconsistentHeuristic(1, 3, _, _)));
        assert!(SearchTree::new(
            &wm,
            v(0),
            v(3),
            vec![0.0, 0.0, 0.0, 1.0],
            WeightPolicy::Lazy
        )
        .is_err());
    }
}
