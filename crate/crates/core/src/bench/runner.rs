use std::sync::Arc;
use std::time::Duration;

use serde::Serialize;

use super::geometry::World;
use super::roadmap::Roadmap;
use super::scenario::{PlannerSpec, ScenarioSpec};
use crate::baselines::{dijkstra_true, OracleResult};
use crate::dyngraph::{BoxedOracle, Edge, GraphDelta, TableOracle, VertexId};
use crate::error::{Error, Result};
use crate::planner::{Instrumentation, Planner};

/// Deliberate corruption of the planners' oracle, for harness self-tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Every edge reports its free-space length, obstacles or not.
    IgnoreObstacles,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub instrumentation: Instrumentation,
    /// Keep per-episode drawing data.
    pub keep_renders: bool,
    pub fault: Option<Fault>,
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpisodeRow {
    pub scenario: String,
    pub planner: String,
    pub episode: usize,
    pub edge_evals: u64,
    pub vertex_expansions: u64,
    pub event_triggers: u64,
    pub path_cost: f64,
    pub solved: bool,
    pub approx_time_ms: f64,
    pub wall_ms: f64,
    #[serde(skip)]
    pub path: Vec<VertexId>,
    #[serde(skip)]
    pub delta_size: usize,
}

#[derive(Clone, Debug, Default)]
pub struct EpisodeRender {
    pub planner: String,
    pub episode: usize,
    /// Every evaluated edge in the planner's ledger with its cost.
    pub evaluated: Vec<(Edge, f64)>,
    pub tree: Vec<Edge>,
    pub expanded: Vec<VertexId>,
    pub path: Vec<VertexId>,
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub scenario: String,
    pub rows: Vec<EpisodeRow>,
    /// Ground truth per scene.
    pub oracle: Vec<OracleResult>,
    pub renders: Vec<EpisodeRender>,
}

impl BenchReport {
    /// Rows that are unsolved although a path exists, or whose cost breaks
    /// the planner's suboptimality bound.
    pub fn violations(&self, spec: &ScenarioSpec) -> Vec<String> {
        let mut out = Vec::new();
        for row in &self.rows {
            let truth = self.oracle[row.episode].dist;
            let p = spec.planners.iter().find(|p| p.label() == row.planner);
            let bound = p.map_or(1.0, |p| p.inflation * p.truncation);
            if !row.solved && truth.is_finite() {
                out.push(format!(
                    "{} episode {}: no path reported but the shortest path costs {truth}",
                    row.planner, row.episode
                ));
            } else if row.solved && !truth.is_finite() {
                out.push(format!(
                    "{} episode {}: path reported where none exists",
                    row.planner, row.episode
                ));
            } else if row.solved && row.path_cost > bound * truth + 1e-9 {
                out.push(format!(
                    "{} episode {}: cost {} exceeds {bound} x {truth}",
                    row.planner, row.episode, row.path_cost
                ));
            }
        }
        out
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for row in &self.rows {
            wr.serialize(row)?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Everything the harness knows about a scenario independent of planners.
pub struct Prepared {
    pub roadmap: Roadmap,
    pub worlds: Vec<Arc<World>>,
    pub true_costs: Vec<Vec<f64>>,
    /// `deltas[i]` leads from scene `i - 1` into scene `i`; `deltas[0]` is empty.
    pub deltas: Vec<GraphDelta>,
    pub oracle: Vec<OracleResult>,
}

impl Prepared {
    pub fn new(spec: &ScenarioSpec) -> Result<Self> {
        let roadmap = Roadmap::build(spec)?;
        let worlds: Vec<Arc<World>> = spec.scenes.iter().cloned().map(Arc::new).collect();
        let true_costs: Vec<Vec<f64>> = worlds.iter().map(|w| roadmap.true_costs(w)).collect();
        let mut deltas = vec![GraphDelta::default()];
        for pair in true_costs.windows(2) {
            deltas.push(roadmap.diff_costs(&pair[0], &pair[1]));
        }
        let graph = &roadmap.graph;
        let oracle = true_costs
            .iter()
            .map(|c| {
                dijkstra_true(
                    graph,
                    |a| c[graph.arc(a).slot.index()],
                    roadmap.start,
                    roadmap.goal,
                )
            })
            .collect();
        Ok(Prepared {
            roadmap,
            worlds,
            true_costs,
            deltas,
            oracle,
        })
    }

    pub fn planner_oracle(
        &self,
        spec: &ScenarioSpec,
        scene: usize,
        fault: Option<Fault>,
    ) -> BoxedOracle {
        match fault {
            Some(Fault::IgnoreObstacles) => {
                Box::new(TableOracle::new(self.roadmap.lengths.clone()))
            }
            None => Box::new(
                self.roadmap
                    .oracle(&self.worlds[scene])
                    .with_busy_wait(Duration::from_micros(spec.oracle_delay_us)),
            ),
        }
    }

    pub fn new_planner(
        &self,
        spec: &ScenarioSpec,
        p: &PlannerSpec,
        fault: Option<Fault>,
    ) -> Result<Planner> {
        let r = &self.roadmap;
        let weights = crate::dyngraph::WeightModel::new(
            r.graph.clone(),
            r.lengths.clone(),
            self.planner_oracle(spec, 0, fault),
        )?;
        Planner::new(weights, r.start, r.goal, r.heuristic.clone(), p.config())
    }

    /// Runs one planner through every scene.
    pub fn run_planner(
        &self,
        spec: &ScenarioSpec,
        p: &PlannerSpec,
        options: &RunOptions,
        renders: &mut Vec<EpisodeRender>,
    ) -> Result<Vec<EpisodeRow>> {
        let label = p.label();
        let wrap = |episode: usize| {
            let planner = label.clone();
            move |e: Error| Error::Episode {
                planner,
                episode,
                source: Box::new(e),
            }
        };
        let mut planner = self.new_planner(spec, p, options.fault).map_err(wrap(0))?;
        planner.set_instrumentation(options.instrumentation);
        let mut rows = Vec::with_capacity(self.worlds.len());
        for ep in 0..self.worlds.len() {
            if ep > 0 {
                planner.set_oracle(self.planner_oracle(spec, ep, options.fault));
                planner.notify_changes(&self.deltas[ep]).map_err(wrap(ep))?;
            }
            let res = planner.plan().map_err(wrap(ep))?;
            let m = res.metrics;
            rows.push(EpisodeRow {
                scenario: spec.name.clone(),
                planner: label.clone(),
                episode: ep,
                edge_evals: m.edge_evaluations,
                vertex_expansions: m.vertex_expansions,
                event_triggers: m.event_triggers,
                path_cost: res.cost,
                solved: res.is_solved(),
                approx_time_ms: spec
                    .cost_model
                    .approx_ms(m.edge_evaluations, m.vertex_expansions),
                wall_ms: m.wall_time.as_secs_f64() * 1e3,
                delta_size: self.deltas[ep].len(),
                path: res.path.clone(),
            });
            if options.keep_renders {
                let graph = self.roadmap.graph.clone();
                renders.push(EpisodeRender {
                    planner: label.clone(),
                    episode: ep,
                    evaluated: planner
                        .weights()
                        .evaluated_slots()
                        .map(|(s, c)| (graph.slot_edge(s), c))
                        .collect(),
                    tree: planner
                        .tree()
                        .tree_arcs()
                        .map(|a| graph.arc_edge(a))
                        .collect(),
                    expanded: planner.last_episode().expanded.clone(),
                    path: res.path,
                });
            }
        }
        Ok(rows)
    }
}

pub fn run_scenario(spec: &ScenarioSpec, options: &RunOptions) -> Result<BenchReport> {
    let prepared = Prepared::new(spec)?;
    run_prepared(&prepared, spec, options)
}

pub fn run_prepared(
    prepared: &Prepared,
    spec: &ScenarioSpec,
    options: &RunOptions,
) -> Result<BenchReport> {
    let mut rows = Vec::new();
    let mut renders = Vec::new();
    for p in &spec.planners {
        rows.extend(prepared.run_planner(spec, p, options, &mut renders)?);
    }
    Ok(BenchReport {
        scenario: spec.name.clone(),
        rows,
        oracle: prepared.oracle.clone(),
        renders,
    })
}
