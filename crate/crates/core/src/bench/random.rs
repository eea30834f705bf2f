//! Seeded random dynamic scenarios.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::geometry::{Obstacle, Point, World};
use super::roadmap::{nearest, sample_points, Roadmap};
use super::scenario::{CostModel, PlannerSpec, Sampling, ScenarioSpec, DEFAULT_COLLISION_STEP};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RandomScenarioConfig {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Number of scene changes (so scenes = deltas + 1).
    pub min_deltas: usize,
    pub max_deltas: usize,
    pub collision_step: f64,
}

impl Default for RandomScenarioConfig {
    fn default() -> Self {
        RandomScenarioConfig {
            min_vertices: 50,
            max_vertices: 300,
            min_deltas: 3,
            max_deltas: 6,
            collision_step: DEFAULT_COLLISION_STEP,
        }
    }
}

fn random_obstacle(rng: &mut ChaCha8Rng, keep_free: &[Point]) -> Obstacle {
    loop {
        let c = [rng.gen_range(0.1..0.9), rng.gen_range(0.05..0.95)];
        let o = if rng.gen_bool(0.6) {
            let hw = rng.gen_range(0.02..0.15);
            let hh = rng.gen_range(0.02..0.3);
            Obstacle::Rect {
                min: [c[0] - hw, c[1] - hh],
                max: [c[0] + hw, c[1] + hh],
            }
        } else {
            Obstacle::Circle {
                center: c,
                radius: rng.gen_range(0.04..0.15),
            }
        };
        if keep_free.iter().all(|p| !o.contains(p)) {
            return o;
        }
    }
}

fn mutate(rng: &mut ChaCha8Rng, world: &World, keep_free: &[Point]) -> World {
    let mut obstacles = world.obstacles.clone();
    let remove = !obstacles.is_empty() && rng.gen_bool(0.5);
    if remove {
        obstacles.remove(rng.gen_range(0..obstacles.len()));
    }
    if !remove || rng.gen_bool(0.4) {
        for _ in 0..rng.gen_range(1..=2) {
            obstacles.push(random_obstacle(rng, keep_free));
        }
    }
    World::new(obstacles)
}

/// Builds a scenario whose every scene change alters at least one edge.
/// Start and goal vertices are never covered by an obstacle.
pub fn random_scenario(
    seed: u64,
    cfg: &RandomScenarioConfig,
    planners: Vec<PlannerSpec>,
) -> Result<ScenarioSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (sampling, vertices, radius) = if rng.gen_bool(0.6) {
        let n = rng.gen_range(cfg.min_vertices..=cfg.max_vertices);
        let r = (2.5 * (n as f64).ln() / (std::f64::consts::PI * n as f64)).sqrt();
        (Sampling::Halton, n, r)
    } else {
        let lo = (cfg.min_vertices as f64).sqrt().ceil() as usize;
        let hi = (cfg.max_vertices as f64).sqrt().floor() as usize;
        let k = rng.gen_range(lo.max(2)..=hi.max(2));
        let spacing = 1.0 / (k - 1) as f64;
        (Sampling::Grid, k * k, spacing * rng.gen_range(1.05..1.5))
    };
    let start = [rng.gen_range(0.0..0.15), rng.gen_range(0.05..0.95)];
    let goal = [rng.gen_range(0.85..1.0), rng.gen_range(0.05..0.95)];

    let points = sample_points(sampling, vertices);
    let keep_free = [
        points[nearest(&points, start.into()).index()],
        points[nearest(&points, goal.into()).index()],
    ];
    let roadmap = Roadmap::from_points(
        points.clone(),
        radius,
        start.into(),
        goal.into(),
        cfg.collision_step,
    )?;

    let first = World::new(
        (0..rng.gen_range(2..=5))
            .map(|_| random_obstacle(&mut rng, &keep_free))
            .collect(),
    );
    let mut scenes = vec![first];
    let changes = rng.gen_range(cfg.min_deltas..=cfg.max_deltas);
    for _ in 0..changes {
        let prev = Arc::new(scenes.last().expect("nonempty").clone());
        let mut next = None;
        for _ in 0..200 {
            let cand = Arc::new(mutate(&mut rng, &prev, &keep_free));
            if !roadmap.diff_scenes(&prev, &cand).is_empty() {
                next = Some(cand);
                break;
            }
        }
        let next = next.ok_or_else(|| {
            Error::Scenario(format!(
                "seed {seed}: could not find a scene change that alters an edge"
            ))
        })?;
        scenes.push((*next).clone());
    }
    for (i, s) in scenes.iter_mut().enumerate() {
        s.version = i as u32;
    }

    let spec = ScenarioSpec {
        name: format!("random-{seed}"),
        sampling,
        vertices,
        radius,
        start,
        goal,
        collision_step: cfg.collision_step,
        oracle_delay_us: 0,
        cost_model: CostModel::default(),
        planners,
        scenes,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::Algorithm;

    #[test]
    fn deterministic_and_within_ranges() {
        let cfg = RandomScenarioConfig::default();
        let planners = vec![PlannerSpec::new(Algorithm::Lgls)];
        for seed in 0..20 {
            let a = random_scenario(seed, &cfg, planners.clone()).unwrap();
            let b = random_scenario(seed, &cfg, planners.clone()).unwrap();
            assert_eq!(a, b);
            assert!((50..=300).contains(&a.vertices), "{}", a.vertices);
            assert!((4..=7).contains(&a.scenes.len()));
            let r = Roadmap::build(&a).unwrap();
            for pair in a.scenes.windows(2) {
                let d = r.diff_scenes(&Arc::new(pair[0].clone()), &Arc::new(pair[1].clone()));
                assert!(!d.is_empty());
            }
        }
    }
}
