//! Evaluate-repair loop and change handling.
//!
//! [`Planner::plan`] alternates tree repair and edge evaluation until the
//! subpath handed back by the tree reaches the goal with every edge
//! evaluated. [`Planner::notify_changes`] folds announced weight changes into
//! the tree without searching; the next `plan` call repairs it.

use std::fmt;
use std::time::{Duration, Instant};

use crate::baselines::dijkstra_distances;
use crate::dyngraph::{BoxedOracle, Edge, GraphDelta, SlotId, VertexId, WeightModel};
use crate::error::{Error, Result};
use crate::events::{Event, ExpansionEvent};
use crate::search_tree::{SearchOutcome, SearchTree, WeightPolicy};

/// Replanning strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Lazy LPA* tree kept across episodes.
    Lgls,
    /// Same inner loop, restarted from scratch after every change.
    Gls,
    /// LPA* evaluating every edge it reads and every announced change.
    Lpastar,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Lgls => "lgls",
            Algorithm::Gls => "gls",
            Algorithm::Lpastar => "lpastar",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlannerConfig {
    pub algorithm: Algorithm,
    pub event: Event,
    /// Heuristic edge weight inflation, `>= 1`.
    pub inflation: f64,
    /// Tree-repair truncation factor, `>= 1`.
    pub truncation: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            algorithm: Algorithm::Lgls,
            event: Event::ShortestPath,
            inflation: 1.0,
            truncation: 1.0,
        }
    }
}

impl PlannerConfig {
    pub fn new(algorithm: Algorithm, event: Event) -> Self {
        PlannerConfig {
            algorithm,
            event,
            ..Default::default()
        }
    }

    pub fn with_factors(mut self, inflation: f64, truncation: f64) -> Self {
        self.inflation = inflation;
        self.truncation = truncation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.inflation >= 1.0 && self.inflation.is_finite()) {
            return Err(Error::Config(format!(
                "inflation {} must be >= 1",
                self.inflation
            )));
        }
        if !(self.truncation >= 1.0 && self.truncation.is_finite()) {
            return Err(Error::Config(format!(
                "truncation {} must be >= 1",
                self.truncation
            )));
        }
        if let Event::ConstantDepth(0) = self.event {
            return Err(Error::Config("constant_depth alpha must be >= 1".into()));
        }
        if self.truncation > 1.0
            && self.algorithm != Algorithm::Lpastar
            && self.event != Event::ShortestPath
        {
            return Err(Error::Config(
                "truncation > 1 is only supported with the shortest_path event".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanStatus {
    Solved,
    NoPath,
}

/// Operation counts for one episode: everything from the end of the
/// previous `plan` call (or construction) through the end of this one,
/// so change handling is billed to the episode it precedes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EpisodeMetrics {
    pub edge_evaluations: u64,
    pub vertex_expansions: u64,
    pub event_triggers: u64,
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanResult {
    pub status: PlanStatus,
    pub path: Vec<VertexId>,
    pub cost: f64,
    pub metrics: EpisodeMetrics,
}

impl PlanResult {
    pub fn is_solved(&self) -> bool {
        self.status == PlanStatus::Solved
    }
}

/// What happened during the last episode, for rendering and audits.
#[derive(Clone, Debug, Default)]
pub struct EpisodeTrace {
    pub expanded: Vec<VertexId>,
    pub evaluated: Vec<SlotId>,
    /// Subpaths returned by tree repair (recorded only when instrumented).
    pub subpaths: Vec<Vec<VertexId>>,
}

/// Lazy cost of an event-triggered subpath against the lazy shortest-path
/// distance to the same vertex, both taken on the frozen lazy weights.
#[derive(Clone, Debug, PartialEq)]
pub struct TriggerSnapshot {
    pub vertex: VertexId,
    pub subpath_cost: f64,
    pub optimum: f64,
}

/// Opt-in runtime checks. Sweeps query the oracle without billing it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Instrumentation {
    pub check_invariants: bool,
    pub record_subpaths: bool,
    pub snapshot_triggers: bool,
}

impl Instrumentation {
    pub fn all() -> Self {
        Instrumentation {
            check_invariants: true,
            record_subpaths: true,
            snapshot_triggers: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Baseline {
    evaluations: u64,
    expansions: u64,
    triggers: u64,
}

pub struct Planner {
    weights: WeightModel,
    tree: SearchTree,
    config: PlannerConfig,
    instrumentation: Instrumentation,
    baseline: Baseline,
    pending_wall: Duration,
    trace: EpisodeTrace,
    last_trace: EpisodeTrace,
    snapshots: Vec<TriggerSnapshot>,
}

impl fmt::Debug for Planner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Planner")
            .field("config", &self.config)
            .field("weights", &self.weights)
            .finish_non_exhaustive()
    }
}

impl Planner {
    pub fn new(
        mut weights: WeightModel,
        start: VertexId,
        goal: VertexId,
        heuristic: Vec<f64>,
        config: PlannerConfig,
    ) -> Result<Self> {
        config.validate()?;
        weights.set_inflation(config.inflation)?;
        let policy = match config.algorithm {
            Algorithm::Lpastar => WeightPolicy::Eager,
            Algorithm::Lgls | Algorithm::Gls => WeightPolicy::Lazy,
        };
        let mut tree = SearchTree::new(&weights, start, goal, heuristic, policy)?;
        tree.set_truncation(config.truncation)?;
        let baseline = Baseline {
            evaluations: weights.eval_count(),
            expansions: 0,
            triggers: 0,
        };
        Ok(Planner {
            weights,
            tree,
            config,
            instrumentation: Instrumentation::default(),
            baseline,
            pending_wall: Duration::ZERO,
            trace: EpisodeTrace::default(),
            last_trace: EpisodeTrace::default(),
            snapshots: Vec::new(),
        })
    }

    pub fn set_instrumentation(&mut self, instrumentation: Instrumentation) {
        self.instrumentation = instrumentation;
    }

    pub fn config(&self) -> &PlannerConfig {
        &self.config
    }

    pub fn weights(&self) -> &WeightModel {
        &self.weights
    }

    pub fn tree(&self) -> &SearchTree {
        &self.tree
    }

    pub fn last_episode(&self) -> &EpisodeTrace {
        &self.last_trace
    }

    pub fn trigger_snapshots(&self) -> &[TriggerSnapshot] {
        &self.snapshots
    }

    /// Installs the oracle for the changed world. Call before announcing
    /// the corresponding delta.
    pub fn set_oracle(&mut self, oracle: BoxedOracle) {
        self.weights.set_oracle(oracle);
    }

    fn event(&self) -> Option<Event> {
        match self.config.algorithm {
            Algorithm::Lpastar => None,
            Algorithm::Lgls | Algorithm::Gls => Some(self.config.event),
        }
    }

    /// Evaluates the unevaluated edges of `path` from the start forward and
    /// returns the first one whose true cost differs from its lazy value.
    /// Later edges are left alone.
    pub fn evaluate_edges(&mut self, path: &[VertexId]) -> Result<Option<Edge>> {
        let graph = self.weights.graph().clone();
        for pair in path.windows(2) {
            let edge = Edge {
                source: pair[0],
                target: pair[1],
            };
            let arc = graph.find_arc(edge)?;
            if self.weights.is_arc_evaluated(arc) {
                continue;
            }
            let prior = self.weights.lazy_arc(arc);
            let w = self.weights.evaluate_arc(arc)?;
            if w != prior {
                return Ok(Some(edge));
            }
        }
        Ok(None)
    }

    pub fn plan(&mut self) -> Result<PlanResult> {
        let started = Instant::now();
        let goal = self.tree.goal();
        let outcome = loop {
            let event = self.event();
            let event = event.as_ref().map(|e| e as &dyn ExpansionEvent);
            let out = self.tree.compute_shortest_path(&mut self.weights, event)?;
            self.after_search(&out)?;
            let SearchOutcome::Subpath { path, .. } = out else {
                break None;
            };
            match self.evaluate_edges(&path)? {
                Some(edge) => {
                    self.tree.update_vertex(&mut self.weights, edge.target)?;
                    if self.weights.graph().is_undirected() {
                        self.tree.update_vertex(&mut self.weights, edge.source)?;
                    }
                }
                None if path.last() == Some(&goal) => break Some(path),
                None => {}
            }
        };
        self.check_sweeps()?;

        let (status, path, cost) = match outcome {
            Some(path) => {
                let cost = self.tree.path_lazy_cost(&self.weights, &path)?;
                (PlanStatus::Solved, path, cost)
            }
            None => (PlanStatus::NoPath, Vec::new(), f64::INFINITY),
        };
        let metrics = self.close_episode(started.elapsed());
        Ok(PlanResult {
            status,
            path,
            cost,
            metrics,
        })
    }

    /// Announces edges whose true weight changed. No search happens here.
    pub fn notify_changes(&mut self, delta: &GraphDelta) -> Result<()> {
        let started = Instant::now();
        match self.config.algorithm {
            Algorithm::Lgls => {
                let affected = self.weights.apply_delta(delta)?;
                for v in affected {
                    self.tree.update_vertex(&mut self.weights, v)?;
                }
            }
            Algorithm::Lpastar => {
                let slots = self.weights.delta_slots(delta)?;
                let affected = self.weights.apply_delta(delta)?;
                for slot in slots {
                    self.weights.evaluate_slot(slot)?;
                }
                for v in affected {
                    self.tree.update_vertex(&mut self.weights, v)?;
                }
            }
            Algorithm::Gls => {
                self.weights.delta_slots(delta)?;
                self.weights.clear_ledger();
                self.tree.reset();
            }
        }
        self.check_sweeps()?;
        self.pending_wall += started.elapsed();
        Ok(())
    }

    fn after_search(&mut self, out: &SearchOutcome) -> Result<()> {
        let ins = self.instrumentation;
        if ins.check_invariants && self.tree.max_pops_last_call() > 2 {
            return Err(Error::Invariant(format!(
                "a vertex was expanded {} times in one repair call",
                self.tree.max_pops_last_call()
            )));
        }
        let SearchOutcome::Subpath { path, triggered } = out else {
            return Ok(());
        };
        if ins.record_subpaths {
            self.trace.subpaths.push(path.clone());
        }
        if ins.snapshot_triggers && *triggered {
            let graph = self.weights.graph().clone();
            let weights = &self.weights;
            let dist = dijkstra_distances(&graph, |a| weights.lazy_arc(a), self.tree.start());
            let v = *path.last().expect("non-empty subpath");
            let snap = TriggerSnapshot {
                vertex: v,
                subpath_cost: self.tree.path_lazy_cost(&self.weights, path)?,
                optimum: dist[v.index()],
            };
            if ins.check_invariants && (snap.subpath_cost - snap.optimum).abs() > 1e-9 {
                return Err(Error::Invariant(format!(
                    "triggered subpath to {v} costs {} but the lazy optimum is {}",
                    snap.subpath_cost, snap.optimum
                )));
            }
            self.snapshots.push(snap);
        }
        Ok(())
    }

    fn check_sweeps(&self) -> Result<()> {
        if !self.instrumentation.check_invariants {
            return Ok(());
        }
        self.tree.check_invariants(&self.weights)?;
        if self.weights.inflation() == 1.0 {
            for slot in self.weights.graph().slots() {
                let lazy = self.weights.lazy_slot(slot);
                let truth = self.weights.peek_true_cost(slot)?;
                if lazy > truth {
                    return Err(Error::Invariant(format!(
                        "lazy weight {lazy} of slot {} exceeds true weight {truth}",
                        slot.0
                    )));
                }
            }
        }
        Ok(())
    }

    fn close_episode(&mut self, plan_wall: Duration) -> EpisodeMetrics {
        let now = Baseline {
            evaluations: self.weights.eval_count(),
            expansions: self.tree.expansions(),
            triggers: self.tree.triggers(),
        };
        let metrics = EpisodeMetrics {
            edge_evaluations: now.evaluations - self.baseline.evaluations,
            vertex_expansions: now.expansions - self.baseline.expansions,
            event_triggers: now.triggers - self.baseline.triggers,
            wall_time: plan_wall + std::mem::take(&mut self.pending_wall),
        };
        self.baseline = now;
        let mut trace = std::mem::take(&mut self.trace);
        trace.expanded = self.tree.take_expanded_log();
        trace.evaluated = self.weights.take_log();
        self.last_trace = trace;
        metrics
    }
}
