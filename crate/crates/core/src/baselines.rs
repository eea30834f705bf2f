//! Ground-truth shortest paths over fully evaluated weights.
//!
//! These run outside every planner's ledger and counters. Ties are broken
//! the same way the planners break them: smaller vertex id first in the
//! queue, smaller predecessor id for equal-cost parents.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::dyngraph::{ArcId, Graph, VertexId, WeightModel};
use crate::error::Result;

const INF: f64 = f64::INFINITY;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub dist: f64,
    pub path: Option<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AStarResult {
    pub result: OracleResult,
    pub expansions: u64,
    /// Distinct evaluation slots whose weight was read.
    pub evaluations: u64,
    pub order: Vec<VertexId>,
}

#[derive(PartialEq)]
struct Open {
    f: f64,
    g: f64,
    v: VertexId,
}

impl Eq for Open {}

impl Ord for Open {
    // reversed for a min-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.g.total_cmp(&self.g))
            .then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Per-slot true costs, read without billing any counter.
pub fn true_slot_costs(weights: &WeightModel) -> Result<Vec<f64>> {
    weights
        .graph()
        .slots()
        .map(|s| weights.peek_true_cost(s))
        .collect()
}

/// Per-slot lazy costs as they stand right now.
pub fn lazy_slot_costs(weights: &WeightModel) -> Vec<f64> {
    weights
        .graph()
        .slots()
        .map(|s| weights.lazy_slot(s))
        .collect()
}

/// Single-source distances from `source` under `weight`.
pub fn dijkstra_distances(
    graph: &Graph,
    mut weight: impl FnMut(ArcId) -> f64,
    source: VertexId,
) -> Vec<f64> {
    let n = graph.vertex_count();
    let zero = vec![0.0; n];
    let mut dist = vec![INF; n];
    let mut parent = vec![None; n];
    search(
        graph,
        &mut weight,
        &zero,
        source,
        None,
        &mut dist,
        &mut parent,
        &mut Vec::new(),
        &mut |_| {},
    );
    dist
}

/// Exact shortest path between two vertices.
pub fn dijkstra_true(
    graph: &Graph,
    weight: impl FnMut(ArcId) -> f64,
    source: VertexId,
    goal: VertexId,
) -> OracleResult {
    let n = graph.vertex_count();
    astar_true(graph, &vec![0.0; n], weight, source, goal).result
}

/// Convenience: Dijkstra on the oracle costs behind `weights`.
pub fn oracle_shortest_path(
    weights: &WeightModel,
    source: VertexId,
    goal: VertexId,
) -> Result<OracleResult> {
    let costs = true_slot_costs(weights)?;
    let graph = weights.graph();
    Ok(dijkstra_true(
        graph,
        |a| costs[graph.arc(a).slot.index()],
        source,
        goal,
    ))
}

/// A* with a consistent heuristic; stops when the goal is popped.
pub fn astar_true(
    graph: &Graph,
    h: &[f64],
    mut weight: impl FnMut(ArcId) -> f64,
    source: VertexId,
    goal: VertexId,
) -> AStarResult {
    let n = graph.vertex_count();
    let mut dist = vec![INF; n];
    let mut parent = vec![None; n];
    let mut order = Vec::new();
    let mut seen = vec![false; graph.slot_count()];
    let mut evaluations = 0u64;
    let mut counted = |a: ArcId| {
        let s = graph.arc(a).slot.index();
        if !seen[s] {
            seen[s] = true;
            evaluations += 1;
        }
    };
    search(
        graph,
        &mut weight,
        h,
        source,
        Some(goal),
        &mut dist,
        &mut parent,
        &mut order,
        &mut counted,
    );
    let path = dist[goal.index()].is_finite().then(|| {
        let mut p = vec![goal];
        let mut cur = goal;
        while let Some(u) = parent[cur.index()] {
            p.push(u);
            cur = u;
        }
        p.reverse();
        p
    });
    AStarResult {
        result: OracleResult {
            dist: dist[goal.index()],
            path,
        },
        expansions: order.len() as u64,
        evaluations,
        order,
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    graph: &Graph,
    weight: &mut impl FnMut(ArcId) -> f64,
    h: &[f64],
    source: VertexId,
    goal: Option<VertexId>,
    dist: &mut [f64],
    parent: &mut [Option<VertexId>],
    order: &mut Vec<VertexId>,
    on_read: &mut impl FnMut(ArcId),
) {
    let mut closed = vec![false; graph.vertex_count()];
    let mut open = BinaryHeap::new();
    dist[source.index()] = 0.0;
    open.push(Open {
        f: h[source.index()],
        g: 0.0,
        v: source,
    });
    while let Some(Open { v: u, g, .. }) = open.pop() {
        if closed[u.index()] || g > dist[u.index()] {
            continue;
        }
        closed[u.index()] = true;
        order.push(u);
        if Some(u) == goal {
            break;
        }
        for &arc in graph.successors(u) {
            let v = graph.arc(arc).target;
            if v == source {
                continue;
            }
            on_read(arc);
            let cand = dist[u.index()] + weight(arc);
            if cand == INF {
                continue;
            }
            let d = dist[v.index()];
            if cand < d {
                dist[v.index()] = cand;
                parent[v.index()] = Some(u);
                open.push(Open {
                    f: cand + h[v.index()],
                    g: cand,
                    v,
                });
            } else if cand == d && parent[v.index()].is_some_and(|p| u < p) {
                parent[v.index()] = Some(u);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyngraph::Directedness;

    fn graph(n: usize, edges: &[(u32, u32)]) -> Graph {
        let mut b = Graph::builder(n, Directedness::Directed);
        for &(u, v) in edges {
            b.add_edge(VertexId(u), VertexId(v)).unwrap();
        }
        b.build()
    }

    #[test]
    fn same_source_and_goal() {
        let g = graph(2, &[(0, 1)]);
        let r = dijkstra_true(&g, |_| 1.0, VertexId(0), VertexId(0));
        assert_eq!(r.dist, 0.0);
        assert_eq!(r.path, Some(vec![VertexId(0)]));
    }

    #[test]
    fn diamond_with_blocked_route() {
        // s->a->g costs 1 + inf, s->b->g costs 2 + 2
        let g = graph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let w = [1.0, 2.0, INF, 2.0];
        let r = dijkstra_true(&g, |a| w[a.index()], VertexId(0), VertexId(3));
        assert_eq!(r.dist, 4.0);
        assert_eq!(r.path, Some(vec![VertexId(0), VertexId(2), VertexId(3)]));
    }

    #[test]
    fn disconnected_pair() {
        let g = graph(3, &[(0, 1)]);
        let r = dijkstra_true(&g, |_| 1.0, VertexId(0), VertexId(2));
        assert_eq!(r.dist, INF);
        assert!(r.path.is_none());
        let d = dijkstra_distances(&g, |_| 1.0, VertexId(0));
        assert_eq!(d, vec![0.0, 1.0, INF]);
    }

    #[test]
    fn zero_heuristic_astar_settles_like_dijkstra() {
        let g = graph(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (1, 4)]);
        let w = [1.0, 1.0, 2.0, 2.0, 1.0, 5.0];
        let a = astar_true(&g, &[0.0; 5], |x| w[x.index()], VertexId(0), VertexId(4));
        assert_eq!(
            a.order,
            vec![
                VertexId(0),
                VertexId(1),
                VertexId(2),
                VertexId(3),
                VertexId(4)
            ]
        );
        assert_eq!(a.result.dist, 4.0);
        // equal-cost parents of 3: 1 and 2, smaller id wins
        assert_eq!(
            a.result.path,
            Some(vec![VertexId(0), VertexId(1), VertexId(3), VertexId(4)])
        );
        assert_eq!(a.expansions, 5);
        assert_eq!(a.evaluations, 6);
    }
}
