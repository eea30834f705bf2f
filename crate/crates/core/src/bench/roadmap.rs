use std::sync::Arc;

use super::geometry::{CollisionOracle, Point, World};
use super::halton::halton_2d;
use super::scenario::{grid_side, Sampling, ScenarioSpec};
use crate::dyngraph::{Directedness, Graph, GraphDelta, VertexId, WeightModel};
use crate::error::Result;

// Shaves rounding noise off Euclidean goal distances so the heuristic stays
// consistent against Euclidean edge lengths in floating point.
const HEURISTIC_SCALE: f64 = 1.0 - 1e-12;

/// A radius graph over points in the unit square.
#[derive(Clone, Debug)]
pub struct Roadmap {
    pub graph: Arc<Graph>,
    pub points: Arc<Vec<Point>>,
    pub start: VertexId,
    pub goal: VertexId,
    /// Euclidean length per evaluation slot.
    pub lengths: Vec<f64>,
    /// Goal-distance heuristic per vertex.
    pub heuristic: Vec<f64>,
    pub collision_step: f64,
}

pub fn sample_points(sampling: Sampling, n: usize) -> Vec<Point> {
    match sampling {
        Sampling::Grid => {
            let k = grid_side(n);
            let scale = if k > 1 { 1.0 / (k - 1) as f64 } else { 0.0 };
            (0..k * k)
                .map(|i| Point::new((i % k) as f64 * scale, (i / k) as f64 * scale))
                .collect()
        }
        Sampling::Halton => halton_2d(n).into_iter().map(Point::from).collect(),
    }
}

/// Nearest point; ties go to the lowest index.
pub fn nearest(points: &[Point], target: Point) -> VertexId {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        let d = p.distance(&target);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    VertexId(best as u32)
}

impl Roadmap {
    pub fn build(spec: &ScenarioSpec) -> Result<Self> {
        spec.validate()?;
        Self::from_points(
            sample_points(spec.sampling, spec.vertices),
            spec.radius,
            spec.start.into(),
            spec.goal.into(),
            spec.collision_step,
        )
    }

    pub fn from_points(
        points: Vec<Point>,
        radius: f64,
        start: Point,
        goal: Point,
        collision_step: f64,
    ) -> Result<Self> {
        let n = points.len();
        let mut b = Graph::builder(n, Directedness::Undirected);
        let mut lengths = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let d = points[i].distance(&points[j]);
                if d <= radius {
                    b.add_edge(VertexId(i as u32), VertexId(j as u32))?;
                    lengths.push(d);
                }
            }
        }
        let start = nearest(&points, start);
        let goal = nearest(&points, goal);
        let g = points[goal.index()];
        let heuristic = points
            .iter()
            .map(|p| p.distance(&g) * HEURISTIC_SCALE)
            .collect();
        Ok(Roadmap {
            graph: Arc::new(b.build()),
            points: Arc::new(points),
            start,
            goal,
            lengths,
            heuristic,
            collision_step,
        })
    }

    pub fn oracle(&self, world: &Arc<World>) -> CollisionOracle {
        CollisionOracle::new(self.points.clone(), world.clone(), self.collision_step)
    }

    /// Fresh weights over this graph with the world's collision oracle.
    pub fn weight_model(&self, oracle: CollisionOracle) -> Result<WeightModel> {
        WeightModel::new(self.graph.clone(), self.lengths.clone(), Box::new(oracle))
    }

    /// True cost of every slot in `world`, outside any planner's ledger.
    pub fn true_costs(&self, world: &Arc<World>) -> Vec<f64> {
        let oracle = self.oracle(world);
        self.graph
            .slots()
            .map(|s| oracle.edge_cost(self.graph.slot_edge(s)))
            .collect()
    }

    /// Edges whose collision status differs between two scenes, one per slot.
    pub fn diff_scenes(&self, old: &Arc<World>, new: &Arc<World>) -> GraphDelta {
        let before = self.true_costs(old);
        let after = self.true_costs(new);
        self.diff_costs(&before, &after)
    }

    pub fn diff_costs(&self, before: &[f64], after: &[f64]) -> GraphDelta {
        GraphDelta::new(
            self.graph
                .slots()
                .filter(|s| before[s.index()] != after[s.index()])
                .map(|s| self.graph.slot_edge(s))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::geometry::Obstacle;

    fn corners() -> Roadmap {
        Roadmap::from_points(
            sample_points(Sampling::Grid, 4),
            1.0,
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            0.01,
        )
        .unwrap()
    }

    #[test]
    fn unit_square_corners_have_sides_only() {
        let r = corners();
        assert_eq!(r.graph.slot_count(), 4);
        assert!(r.lengths.iter().all(|&l| l == 1.0));
        assert_eq!(r.start, VertexId(0));
        assert_eq!(r.goal, VertexId(3));
    }

    #[test]
    fn snapping_prefers_lowest_id() {
        let pts = sample_points(Sampling::Grid, 4);
        // equidistant from all four corners
        assert_eq!(nearest(&pts, Point::new(0.5, 0.5)), VertexId(0));
    }

    #[test]
    fn rebuild_is_identical() {
        let mk = || {
            Roadmap::from_points(
                sample_points(Sampling::Halton, 120),
                0.2,
                Point::new(0.1, 0.1),
                Point::new(0.9, 0.9),
                0.01,
            )
            .unwrap()
        };
        let (a, b) = (mk(), mk());
        assert_eq!(a.lengths, b.lengths);
        let ea: Vec<_> = a.graph.arcs().map(|(_, d)| (d.source, d.target)).collect();
        let eb: Vec<_> = b.graph.arcs().map(|(_, d)| (d.source, d.target)).collect();
        assert_eq!(ea, eb);
    }

    #[test]
    fn diffs_track_single_edge_changes() {
        let r = corners();
        let empty = Arc::new(World::default());
        assert!(r.diff_scenes(&empty, &empty).is_empty());
        // a small box on the bottom side (0,0)-(1,0) only
        let boxed = Arc::new(World::new(vec![Obstacle::Rect {
            min: [0.45, -0.05],
            max: [0.55, 0.05],
        }]));
        let added = r.diff_scenes(&empty, &boxed);
        assert_eq!(added.changed.len(), 1);
        let e = added.changed[0];
        assert_eq!((e.source, e.target), (VertexId(0), VertexId(1)));
        let removed = r.diff_scenes(&boxed, &empty);
        assert_eq!(removed, added);
    }

    #[test]
    fn lazy_weights_never_exceed_true_costs() {
        let r = corners();
        let w = Arc::new(World::new(vec![Obstacle::Circle {
            center: [0.0, 0.5],
            radius: 0.2,
        }]));
        for (l, t) in r.lengths.iter().zip(r.true_costs(&w)) {
            assert!(*l <= t);
        }
    }
}
