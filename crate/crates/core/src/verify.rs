//! Randomized optimality and suboptimality-bound checks against ground truth.
//!
//! Trial `i` uses scenario seed `seed + i`, so a failing trial replays with
//! `--seed <printed seed> --trials 1`.

use crate::bench::runner::{EpisodeRow, Fault, Prepared, RunOptions};
use crate::bench::{random_scenario, PlannerSpec, RandomScenarioConfig};
use crate::error::Result;
use crate::planner::{Algorithm, Instrumentation};

pub const ABS_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub inflation: f64,
    pub truncation: f64,
    pub fault: Option<Fault>,
    pub instrumentation: Instrumentation,
    pub scenarios: RandomScenarioConfig,
    /// Overrides the default planner set when non-empty.
    pub planners: Vec<PlannerSpec>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trials: 200,
            seed: 0,
            inflation: 1.0,
            truncation: 1.0,
            fault: None,
            instrumentation: Instrumentation::default(),
            scenarios: RandomScenarioConfig::default(),
            planners: Vec::new(),
        }
    }
}

impl VerifyConfig {
    /// Every planner family the factors allow. Constant-depth events are
    /// left out when truncation is on.
    pub fn planner_set(&self) -> Vec<PlannerSpec> {
        if !self.planners.is_empty() {
            return self.planners.clone();
        }
        let mut set = vec![PlannerSpec::new(Algorithm::Lgls)];
        if self.truncation == 1.0 {
            set.push(PlannerSpec::new(Algorithm::Lgls).constant_depth(1));
            set.push(PlannerSpec::new(Algorithm::Lgls).constant_depth(3));
        }
        set.push(PlannerSpec::new(Algorithm::Gls));
        set.push(PlannerSpec::new(Algorithm::Lpastar));
        set.into_iter()
            .map(|p| p.with_factors(self.inflation, self.truncation))
            .collect()
    }

    pub fn bound(&self) -> f64 {
        self.inflation * self.truncation
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialFailure {
    pub seed: u64,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub trials: usize,
    pub passed: usize,
    /// Planner episodes checked across all trials.
    pub episodes: usize,
    pub failures: Vec<TrialFailure>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }

    pub fn summary(&self) -> String {
        format!("{}/{} optimality checks passed", self.passed, self.trials)
    }
}

/// Problems with one planner episode measured against ground truth.
pub fn check_row(prepared: &Prepared, row: &EpisodeRow, bound: f64) -> Option<String> {
    let truth = prepared.oracle[row.episode].dist;
    let tag = format!("{} episode {}", row.planner, row.episode);
    if !row.solved {
        return truth
            .is_finite()
            .then(|| format!("{tag}: no path reported but the shortest path costs {truth}"));
    }
    if !truth.is_finite() {
        return Some(format!("{tag}: reported a path but none exists"));
    }
    let r = &prepared.roadmap;
    if row.path.first() != Some(&r.start) || row.path.last() != Some(&r.goal) {
        return Some(format!("{tag}: path does not join start and goal"));
    }
    let graph = &r.graph;
    let costs = &prepared.true_costs[row.episode];
    let mut actual = 0.0;
    for pair in row.path.windows(2) {
        match graph.find_arc(crate::dyngraph::Edge::new(pair[0], pair[1])) {
            Ok(a) => actual += costs[graph.arc(a).slot.index()],
            Err(e) => return Some(format!("{tag}: {e}")),
        }
    }
    if (actual - row.path_cost).abs() > ABS_TOL || !actual.is_finite() {
        return Some(format!(
            "{tag}: reported cost {} but the path really costs {actual}",
            row.path_cost
        ));
    }
    if bound == 1.0 {
        if (actual - truth).abs() > ABS_TOL {
            return Some(format!(
                "{tag}: cost {actual} differs from the optimum {truth}"
            ));
        }
    } else if actual > bound * truth + ABS_TOL {
        return Some(format!("{tag}: cost {actual} exceeds {bound} x {truth}"));
    }
    None
}

/// Runs one randomized trial; returns the episode count and any failures.
pub fn run_trial(seed: u64, cfg: &VerifyConfig) -> Result<(usize, Vec<String>)> {
    let spec = random_scenario(seed, &cfg.scenarios, cfg.planner_set())?;
    let prepared = Prepared::new(&spec)?;
    let options = RunOptions {
        instrumentation: cfg.instrumentation,
        keep_renders: false,
        fault: cfg.fault,
    };
    let mut problems = Vec::new();
    let mut episodes = 0;
    for p in &spec.planners {
        match prepared.run_planner(&spec, p, &options, &mut Vec::new()) {
            Ok(rows) => {
                episodes += rows.len();
                let bound = p.inflation * p.truncation;
                problems.extend(rows.iter().filter_map(|r| check_row(&prepared, r, bound)));
            }
            Err(e) => problems.push(e.to_string()),
        }
    }
    Ok((episodes, problems))
}

pub fn verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut report = VerifyReport {
        trials: cfg.trials,
        ..Default::default()
    };
    for i in 0..cfg.trials {
        let seed = cfg.seed.wrapping_add(i as u64);
        let (episodes, problems) = run_trial(seed, cfg)?;
        report.episodes += episodes;
        if problems.is_empty() {
            report.passed += 1;
        } else {
            report.failures.push(TrialFailure {
                seed,
                message: problems.join("; "),
            });
        }
    }
    Ok(report)
}
