//! 2D roadmap benchmark: geometric graphs, changing obstacle scenes, a
//! sampled collision oracle and per-episode metrics.

pub mod geometry;
pub mod halton;
pub mod random;
pub mod roadmap;
pub mod runner;
pub mod scenario;
pub mod svg;

pub use geometry::{CollisionOracle, Obstacle, Point, World};
pub use random::{random_scenario, RandomScenarioConfig};
pub use roadmap::Roadmap;
pub use runner::{
    run_scenario, BenchReport, EpisodeRender, EpisodeRow, Fault, Prepared, RunOptions,
};
pub use scenario::{CostModel, EventKind, PlannerSpec, Sampling, ScenarioSpec};
