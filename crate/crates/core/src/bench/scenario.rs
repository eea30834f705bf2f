use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::geometry::World;
use crate::error::{Error, Result};
use crate::events::Event;
use crate::planner::{Algorithm, PlannerConfig};

pub const DEFAULT_COLLISION_STEP: f64 = 0.01;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    #[default]
    Grid,
    Halton,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    #[default]
    ShortestPath,
    ConstantDepth,
}

/// One planner row in a scenario file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub event: EventKind,
    #[serde(default = "one_u32")]
    pub alpha: u32,
    #[serde(default = "one_f64")]
    pub inflation: f64,
    #[serde(default = "one_f64")]
    pub truncation: f64,
}

fn one_u32() -> u32 {
    1
}

fn one_f64() -> f64 {
    1.0
}

impl PlannerSpec {
    pub fn new(algorithm: Algorithm) -> Self {
        PlannerSpec {
            name: None,
            algorithm,
            event: EventKind::ShortestPath,
            alpha: 1,
            inflation: 1.0,
            truncation: 1.0,
        }
    }

    pub fn constant_depth(mut self, alpha: u32) -> Self {
        self.event = EventKind::ConstantDepth;
        self.alpha = alpha;
        self
    }

    pub fn with_factors(mut self, inflation: f64, truncation: f64) -> Self {
        self.inflation = inflation;
        self.truncation = truncation;
        self
    }

    pub fn event(&self) -> Event {
        match self.event {
            EventKind::ShortestPath => Event::ShortestPath,
            EventKind::ConstantDepth => Event::ConstantDepth(self.alpha),
        }
    }

    pub fn config(&self) -> PlannerConfig {
        PlannerConfig::new(self.algorithm, self.event())
            .with_factors(self.inflation, self.truncation)
    }

    /// Explicit name, or one derived from the settings.
    pub fn label(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        let mut s = self.algorithm.to_string();
        if self.algorithm != Algorithm::Lpastar && self.event == EventKind::ConstantDepth {
            s.push_str(&format!("-cd{}", self.alpha));
        }
        if self.inflation != 1.0 {
            s.push_str(&format!("-i{}", self.inflation));
        }
        if self.truncation != 1.0 {
            s.push_str(&format!("-t{}", self.truncation));
        }
        s
    }
}

/// Weights for the approximate planning time column, in milliseconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostModel {
    pub eval_ms: f64,
    pub expand_ms: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            eval_ms: 0.20,
            expand_ms: 0.86,
        }
    }
}

impl CostModel {
    pub fn approx_ms(&self, evaluations: u64, expansions: u64) -> f64 {
        self.eval_ms * evaluations as f64 + self.expand_ms * expansions as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub sampling: Sampling,
    pub vertices: usize,
    pub radius: f64,
    pub start: [f64; 2],
    pub goal: [f64; 2],
    #[serde(default = "default_step")]
    pub collision_step: f64,
    /// Busy-wait per oracle call, in microseconds.
    #[serde(default)]
    pub oracle_delay_us: u64,
    #[serde(default)]
    pub cost_model: CostModel,
    pub planners: Vec<PlannerSpec>,
    pub scenes: Vec<World>,
}

fn default_step() -> f64 {
    DEFAULT_COLLISION_STEP
}

impl ScenarioSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut spec: ScenarioSpec = toml::from_str(text)?;
        for (i, scene) in spec.scenes.iter_mut().enumerate() {
            scene.version = i as u32;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut spec = Self::from_toml(&text)?;
        if spec.name.is_empty() {
            spec.name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
        }
        Ok(spec)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Scenario(m));
        if self.vertices < 2 {
            return bad(format!("need at least 2 vertices, got {}", self.vertices));
        }
        if self.sampling == Sampling::Grid {
            let k = grid_side(self.vertices);
            if k * k != self.vertices {
                return bad(format!(
                    "grid sampling needs a square vertex count, got {}",
                    self.vertices
                ));
            }
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad(format!("radius must be positive, got {}", self.radius));
        }
        if !(self.collision_step > 0.0 && self.collision_step.is_finite()) {
            return bad(format!(
                "collision_step must be positive, got {}",
                self.collision_step
            ));
        }
        if self.start.iter().chain(&self.goal).any(|c| !c.is_finite()) {
            return bad("start and goal must be finite".into());
        }
        if self.scenes.is_empty() {
            return bad("at least one scene is required".into());
        }
        if self.planners.is_empty() {
            return bad("at least one planner is required".into());
        }
        for (i, scene) in self.scenes.iter().enumerate() {
            for o in &scene.obstacles {
                o.validate()
                    .map_err(|m| Error::Scenario(format!("scene {i}: {m}")))?;
            }
        }
        let mut names = HashSet::new();
        for p in &self.planners {
            p.config()
                .validate()
                .map_err(|e| Error::Scenario(format!("planner {}: {e}", p.label())))?;
            if !names.insert(p.label()) {
                return bad(format!("duplicate planner name {}", p.label()));
            }
        }
        if !(self.cost_model.eval_ms >= 0.0 && self.cost_model.expand_ms >= 0.0) {
            return bad("cost model weights must be non-negative".into());
        }
        Ok(())
    }
}

pub(crate) fn grid_side(n: usize) -> usize {
    let mut k = (n as f64).sqrt() as usize;
    while k * k > n {
        k -= 1;
    }
    while (k + 1) * (k + 1) <= n {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
        name = "tiny"
        vertices = 9
        radius = 0.6
        start = [0.0, 0.0]
        goal = [1.0, 1.0]

        [[planners]]
        algorithm = "lgls"

        [[planners]]
        algorithm = "lgls"
        event = "constant_depth"
        alpha = 2

        [[scenes]]
        obstacles = [{ kind = "circle", center = [0.5, 0.5], radius = 0.1 }]

        [[scenes]]
    "#;

    #[test]
    fn parses_and_labels() {
        let s = ScenarioSpec::from_toml(SAMPLE).unwrap();
        assert_eq!(s.scenes.len(), 2);
        assert_eq!(s.scenes[1].version, 1);
        assert_eq!(s.collision_step, DEFAULT_COLLISION_STEP);
        let labels: Vec<_> = s.planners.iter().map(|p| p.label()).collect();
        assert_eq!(labels, ["lgls", "lgls-cd2"]);
        let again = ScenarioSpec::from_toml(&s.to_toml().unwrap()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn rejects_bad_specs() {
        let nonsquare = SAMPLE.replace("vertices = 9", "vertices = 10");
        assert!(ScenarioSpec::from_toml(&nonsquare).is_err());
        let halton = nonsquare.replace("name = \"tiny\"", "sampling = \"halton\"");
        assert!(ScenarioSpec::from_toml(&halton).is_ok());
        let radius = SAMPLE.replace("radius = 0.6", "radius = 0.0");
        assert!(ScenarioSpec::from_toml(&radius).is_err());
        let dup = SAMPLE.replace("alpha = 2", "alpha = 2\nname = \"lgls\"");
        assert!(ScenarioSpec::from_toml(&dup).is_err());
        let typo = SAMPLE.replace("radius = 0.6", "radius = 0.6\nradious = 1");
        assert!(ScenarioSpec::from_toml(&typo).is_err());
    }

    #[test]
    fn grid_side_is_exact() {
        assert_eq!(grid_side(400), 20);
        assert_eq!(grid_side(399), 19);
        assert_eq!(grid_side(4), 2);
    }
}
