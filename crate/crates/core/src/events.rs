//! Lookahead toggles deciding when tree repair pauses for edge evaluation.

use std::fmt;

use crate::dyngraph::{VertexId, WeightModel};
use crate::error::{Error, Result};
use crate::search_tree::SearchTree;

/// Decides, each time a vertex becomes consistent through an overconsistent
/// expansion, whether the search should stop and hand the subpath from the
/// start to that vertex over for evaluation.
///
/// Implementations must only trigger on subpaths that end at the goal or
/// contain at least one unevaluated edge, and must trigger at the goal;
/// otherwise the evaluate-repair loop is not guaranteed to terminate.
/// Predicates must not mutate anything.
pub trait ExpansionEvent {
    fn triggered(&self, v: VertexId, tree: &SearchTree, weights: &WeightModel) -> bool;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Event {
    /// Trigger only at the goal (infinite lookahead).
    #[default]
    ShortestPath,
    /// Trigger once the subpath carries `alpha` unevaluated edges, or at the goal.
    ConstantDepth(u32),
}

impl Event {
    pub fn constant_depth(alpha: u32) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::Config("constant_depth alpha must be >= 1".into()));
        }
        Ok(Event::ConstantDepth(alpha))
    }
}


impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::ShortestPath => f.write_str("shortest_path"),
            Event::ConstantDepth(a) => write!(f, "constant_depth({a})"),
        }
    }
}

impl ExpansionEvent for Event {
    fn triggered(&self, v: VertexId, tree: &SearchTree, weights: &WeightModel) -> bool {
        match *self {
            Event::ShortestPath => shortest_path_triggered(v, tree.goal()),
            Event::ConstantDepth(alpha) => constant_depth_triggered(v, alpha, tree, weights),
        }
    }
}

pub fn shortest_path_triggered(v: VertexId, goal: VertexId) -> bool {
    v == goal
}

pub fn constant_depth_triggered(
    v: VertexId,
    alpha: u32,
    tree: &SearchTree,
    weights: &WeightModel,
) -> bool {
    v == tree.goal() || unevaluated_on_subpath(v, alpha, tree, weights) >= alpha
}

/// Counts unevaluated edges on the backpointer chain from `v`, stopping
/// once `limit` is reached.
pub fn unevaluated_on_subpath(
    v: VertexId,
    limit: u32,
    tree: &SearchTree,
    weights: &WeightModel,
) -> u32 {
    let mut count = 0;
    let mut cur = v;
    let mut steps = 0;
    while let Some((parent, arc)) = tree.backpointer(cur) {
        if !weights.is_arc_evaluated(arc) {
            count += 1;
            if count >= limit {
                break;
            }
        }
        cur = parent;
        steps += 1;
        if steps > tree.vertex_count() {
            break;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::dyngraph::{Directedness, Graph, TableOracle};
    use crate::search_tree::WeightPolicy;

    // chain 0 -> 1 -> 2 -> 3 -> 4, goal 4, tree grown to the goal
    fn chain() -> (WeightModel, SearchTree) {
        let mut b = Graph::builder(5, Directedness::Directed);
        for i in 0..4 {
            b.add_edge(VertexId(i), VertexId(i + 1)).unwrap();
        }
        let mut wm = WeightModel::new(
            Arc::new(b.build()),
            vec![1.0; 4],
            Box::new(TableOracle::new(vec![1.0; 4])),
        )
        .unwrap();
        let mut tree = SearchTree::new(
            &wm,
            VertexId(0),
            VertexId(4),
            vec![0.0; 5],
            WeightPolicy::Lazy,
        )
        .unwrap();
        tree.compute_shortest_path(&mut wm, Some(&Event::ShortestPath))
            .unwrap();
        (wm, tree)
    }

    #[test]
    fn shortest_path_fires_only_at_goal() {
        let (wm, tree) = chain();
        assert!(Event::ShortestPath.triggered(VertexId(4), &tree, &wm));
        assert!(!Event::ShortestPath.triggered(VertexId(3), &tree, &wm));
    }

    #[test]
    fn constant_depth_counts_unevaluated_edges() {
        let (mut wm, tree) = chain();
        // one unevaluated edge on 0 -> 1
        assert!(Event::ConstantDepth(1).triggered(VertexId(1), &tree, &wm));
        // (eval, uneval, uneval) on 0 -> 1 -> 2 -> 3
        wm.evaluate(crate::dyngraph::Edge::new(0, 1)).unwrap();
        assert_eq!(unevaluated_on_subpath(VertexId(3), 10, &tree, &wm), 2);
        assert!(Event::ConstantDepth(2).triggered(VertexId(3), &tree, &wm));
        assert!(!Event::ConstantDepth(3).triggered(VertexId(3), &tree, &wm));
        // fully evaluated prefix away from the goal never fires
        assert!(!Event::ConstantDepth(1).triggered(VertexId(1), &tree, &wm));
        // the goal always fires
        assert!(Event::ConstantDepth(9).triggered(VertexId(4), &tree, &wm));
    }

    #[test]
    fn predicates_leave_state_alone() {
        let (wm, tree) = chain();
        let before: Vec<_> = (0..5).map(|i| tree.record(VertexId(i))).collect();
        let evals = wm.eval_count();
        for i in 0..5 {
            for e in [
                Event::ShortestPath,
                Event::ConstantDepth(1),
                Event::ConstantDepth(3),
            ] {
                e.triggered(VertexId(i), &tree, &wm);
            }
        }
        let after: Vec<_> = (0..5).map(|i| tree.record(VertexId(i))).collect();
        assert_eq!(before, after);
        assert_eq!(wm.eval_count(), evals);
        assert_eq!(wm.ledger_len(), 0);
    }

    #[test]
    fn alpha_must_be_positive() {
        assert!(Event::constant_depth(0).is_err());
        assert_eq!(
            Event::constant_depth(2).unwrap().to_string(),
            "constant_depth(2)"
        );
    }
}
