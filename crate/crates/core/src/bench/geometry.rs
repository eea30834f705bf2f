use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::dyngraph::{Edge, EdgeOracle, SlotId};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point {
            x: self.x + (other.x - self.x) * t,
            y: self.y + (other.y - self.y) * t,
        }
    }
}

impl From<[f64; 2]> for Point {
    fn from(p: [f64; 2]) -> Self {
        Point::new(p[0], p[1])
    }
}

/// Closed obstacle region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstacle {
    Rect { min: [f64; 2], max: [f64; 2] },
    Circle { center: [f64; 2], radius: f64 },
}

impl Obstacle {
    pub fn contains(&self, p: &Point) -> bool {
        match *self {
            Obstacle::Rect { min, max } => {
                p.x >= min[0] && p.x <= max[0] && p.y >= min[1] && p.y <= max[1]
            }
            Obstacle::Circle { center, radius } => {
                let dx = p.x - center[0];
                let dy = p.y - center[1];
                dx * dx + dy * dy <= radius * radius
            }
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match *self {
            Obstacle::Rect { min, max } => {
                if min.iter().chain(max.iter()).any(|c| !c.is_finite()) {
                    return Err("rect corners must be finite".into());
                }
                if min[0] > max[0] || min[1] > max[1] {
                    return Err(format!("rect min {min:?} exceeds max {max:?}"));
                }
            }
            Obstacle::Circle { center, radius } => {
                if !(radius > 0.0 && radius.is_finite()) || center.iter().any(|c| !c.is_finite()) {
                    return Err(format!("bad circle at {center:?} with radius {radius}"));
                }
            }
        }
        Ok(())
    }
}

/// One scene of the environment.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct World {
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub version: u32,
}

fn is_zero(v: &u32) -> bool {
    *v == 0
}

impl World {
    pub fn new(obstacles: Vec<Obstacle>) -> Self {
        World {
            obstacles,
            version: 0,
        }
    }

    pub fn is_free(&self, p: &Point) -> bool {
        !self.obstacles.iter().any(|o| o.contains(p))
    }

    /// Samples the segment at spacing at most `step`, endpoints included.
    /// Returns its length if every sample is free, `∞` otherwise.
    pub fn segment_cost(&self, a: &Point, b: &Point, step: f64) -> f64 {
        let len = a.distance(b);
        let intervals = ((len / step).ceil() as usize).max(1);
        for i in 0..=intervals {
            let p = a.lerp(b, i as f64 / intervals as f64);
            if !self.is_free(&p) {
                return f64::INFINITY;
            }
        }
        len
    }
}

/// Collision-checking edge oracle over fixed vertex coordinates.
#[derive(Clone, Debug)]
pub struct CollisionOracle {
    points: std::sync::Arc<Vec<Point>>,
    world: std::sync::Arc<World>,
    step: f64,
    busy_wait: Duration,
}

impl CollisionOracle {
    pub fn new(
        points: std::sync::Arc<Vec<Point>>,
        world: std::sync::Arc<World>,
        step: f64,
    ) -> Self {
        CollisionOracle {
            points,
            world,
            step,
            busy_wait: Duration::ZERO,
        }
    }

    /// Spins for `d` on every call so wall time tracks evaluation counts.
    pub fn with_busy_wait(mut self, d: Duration) -> Self {
        self.busy_wait = d;
        self
    }

    pub fn edge_cost(&self, edge: Edge) -> f64 {
        let a = &self.points[edge.source.index()];
        let b = &self.points[edge.target.index()];
        self.world.segment_cost(a, b, self.step)
    }
}

impl EdgeOracle for CollisionOracle {
    fn cost(&self, _slot: SlotId, edge: Edge) -> f64 {
        if !self.busy_wait.is_zero() {
            let t = Instant::now();
            while t.elapsed() < self.busy_wait {
                std::hint::spin_loop();
            }
        }
        self.edge_cost(edge)
    }
}
