//! C ABI over the replanner.
//!
//! Handles are opaque pointers owned by the caller and released with the
//! matching `*_free` function. Every fallible call returns an [`LglsStatus`];
//! the message for the most recent failure on the calling thread is
//! available from [`lgls_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use lgls::dyngraph::SlotId;
use lgls::planner::Instrumentation;
use lgls::{
    Algorithm, Directedness, Edge, EdgeOracle, Error, Event, Graph, GraphDelta, PlanResult,
    Planner, PlannerConfig, VertexId, WeightModel,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LglsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    VertexOutOfRange = 3,
    UnknownEdge = 4,
    InvalidWeight = 5,
    InconsistentHeuristic = 6,
    InvariantViolation = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LglsAlgorithm {
    Lgls = 0,
    Gls = 1,
    Lpastar = 2,
}

/// Planner settings. `alpha == 0` selects the shortest-path event, any
/// other value a constant-depth event with that many unevaluated edges.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct LglsPlannerOptions {
    pub algorithm: LglsAlgorithm,
    pub alpha: u32,
    pub inflation: f64,
    pub truncation: f64,
    pub check_invariants: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct LglsPlanResult {
    pub solved: bool,
    pub cost: f64,
    pub path_len: usize,
    pub edge_evaluations: u64,
    pub vertex_expansions: u64,
    pub event_triggers: u64,
    pub wall_ms: f64,
}

/// True cost of the edge `(source, target)`. Must return a positive value
/// or positive infinity.
pub type LglsEdgeCostFn =
    Option<unsafe extern "C" fn(user_data: *mut c_void, source: u32, target: u32) -> f64>;

pub struct LglsGraphBuilder {
    vertex_count: usize,
    directedness: Directedness,
    edges: Vec<(u32, u32)>,
    heuristic: Vec<f64>,
}

pub struct LglsPlanner {
    inner: Planner,
    last_path: Vec<u32>,
}

struct CallbackOracle {
    f: unsafe extern "C" fn(*mut c_void, u32, u32) -> f64,
    data: *mut c_void,
}

// The caller promises the callback and its data may be used from the thread
// that drives the planner.
unsafe impl Send for CallbackOracle {}

impl EdgeOracle for CallbackOracle {
    fn cost(&self, _slot: SlotId, edge: Edge) -> f64 {
        unsafe { (self.f)(self.data, edge.source.0, edge.target.0) }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> LglsStatus {
    match e {
        Error::VertexOutOfRange(..) => LglsStatus::VertexOutOfRange,
        Error::UnknownEdge(..) => LglsStatus::UnknownEdge,
        Error::InvalidWeight { .. } => LglsStatus::InvalidWeight,
        Error::InconsistentHeuristic(..) => LglsStatus::InconsistentHeuristic,
        Error::Invariant(_) | Error::BrokenBackpointers(_) => LglsStatus::InvariantViolation,
        Error::Episode { source, .. } => status_of(source),
        _ => LglsStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), LglsStatus>) -> LglsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LglsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            LglsStatus::Panic
        }
    }
}

fn fail(e: Error) -> LglsStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null() -> LglsStatus {
    set_error("null pointer argument");
    LglsStatus::NullPointer
}

/// Creates an empty graph builder, or returns null for zero vertices.
#[no_mangle]
pub extern "C" fn lgls_graph_builder_new(
    vertex_count: u32,
    undirected: bool,
) -> *mut LglsGraphBuilder {
    if vertex_count == 0 {
        set_error("a graph needs at least one vertex");
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(LglsGraphBuilder {
        vertex_count: vertex_count as usize,
        directedness: if undirected {
            Directedness::Undirected
        } else {
            Directedness::Directed
        },
        edges: Vec::new(),
        heuristic: Vec::new(),
    }))
}

/// Adds an edge with its cheap lower-bound weight.
///
/// # Safety
/// `builder` must come from [`lgls_graph_builder_new`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn lgls_graph_builder_add_edge(
    builder: *mut LglsGraphBuilder,
    source: u32,
    target: u32,
    heuristic_weight: f64,
) -> LglsStatus {
    guard(|| {
        let b = unsafe { builder.as_mut() }.ok_or_else(null)?;
        for v in [source, target] {
            if v as usize >= b.vertex_count {
                return Err(fail(Error::VertexOutOfRange(v, b.vertex_count)));
            }
        }
        if !(heuristic_weight > 0.0 && heuristic_weight.is_finite()) {
            return Err(fail(Error::InvalidWeight {
                source_id: source,
                target_id: target,
                value: heuristic_weight,
                reason: "heuristic weights must be positive and finite",
            }));
        }
        b.edges.push((source, target));
        b.heuristic.push(heuristic_weight);
        Ok(())
    })
}

/// # Safety
/// `builder` must be null or come from [`lgls_graph_builder_new`].
#[no_mangle]
pub unsafe extern "C" fn lgls_graph_builder_free(builder: *mut LglsGraphBuilder) {
    if !builder.is_null() {
        drop(unsafe { Box::from_raw(builder) });
    }
}

fn config_of(o: &LglsPlannerOptions) -> PlannerConfig {
    let algorithm = match o.algorithm {
        LglsAlgorithm::Lgls => Algorithm::Lgls,
        LglsAlgorithm::Gls => Algorithm::Gls,
        LglsAlgorithm::Lpastar => Algorithm::Lpastar,
    };
    let event = if o.alpha == 0 {
        Event::ShortestPath
    } else {
        Event::ConstantDepth(o.alpha)
    };
    PlannerConfig::new(algorithm, event).with_factors(o.inflation, o.truncation)
}

/// Default options: lazy planner, shortest-path event, no inflation.
#[no_mangle]
pub extern "C" fn lgls_planner_options_default() -> LglsPlannerOptions {
    LglsPlannerOptions {
        algorithm: LglsAlgorithm::Lgls,
        alpha: 0,
        inflation: 1.0,
        truncation: 1.0,
        check_invariants: false,
    }
}

/// Builds a planner over the builder's graph. The builder stays valid and
/// may be reused or freed afterwards. `heuristic` holds one goal-distance
/// estimate per vertex and may be null for all zeros.
///
/// # Safety
/// Pointers must be valid for the stated lengths; `cost` and `user_data`
/// must stay usable for as long as the planner lives.
#[no_mangle]
pub unsafe extern "C" fn lgls_planner_new(
    builder: *const LglsGraphBuilder,
    options: *const LglsPlannerOptions,
    start: u32,
    goal: u32,
    heuristic: *const f64,
    heuristic_len: usize,
    cost: LglsEdgeCostFn,
    user_data: *mut c_void,
    out: *mut *mut LglsPlanner,
) -> LglsStatus {
    guard(|| {
        let b = unsafe { builder.as_ref() }.ok_or_else(null)?;
        let o = unsafe { options.as_ref() }.ok_or_else(null)?;
        let f = cost.ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let h = if heuristic.is_null() {
            vec![0.0; b.vertex_count]
        } else {
            if heuristic_len != b.vertex_count {
                set_error(format!(
                    "expected {} heuristic values, got {heuristic_len}",
                    b.vertex_count
                ));
                return Err(LglsStatus::InvalidArgument);
            }
            unsafe { std::slice::from_raw_parts(heuristic, heuristic_len) }.to_vec()
        };
        let mut gb = Graph::builder(b.vertex_count, b.directedness);
        for &(u, v) in &b.edges {
            gb.add_edge(VertexId(u), VertexId(v)).map_err(fail)?;
        }
        let weights = WeightModel::new(
            Arc::new(gb.build()),
            b.heuristic.clone(),
            Box::new(CallbackOracle { f, data: user_data }),
        )
        .map_err(fail)?;
        let mut inner = Planner::new(weights, VertexId(start), VertexId(goal), h, config_of(o))
            .map_err(fail)?;
        if o.check_invariants {
            inner.set_instrumentation(Instrumentation {
                check_invariants: true,
                ..Default::default()
            });
        }
        let handle = Box::new(LglsPlanner {
            inner,
            last_path: Vec::new(),
        });
        unsafe { *out = Box::into_raw(handle) };
        Ok(())
    })
}

/// # Safety
/// `planner` must be null or come from [`lgls_planner_new`].
#[no_mangle]
pub unsafe extern "C" fn lgls_planner_free(planner: *mut LglsPlanner) {
    if !planner.is_null() {
        drop(unsafe { Box::from_raw(planner) });
    }
}

fn result_of(r: &PlanResult) -> LglsPlanResult {
    LglsPlanResult {
        solved: r.is_solved(),
        cost: r.cost,
        path_len: r.path.len(),
        edge_evaluations: r.metrics.edge_evaluations,
        vertex_expansions: r.metrics.vertex_expansions,
        event_triggers: r.metrics.event_triggers,
        wall_ms: r.metrics.wall_time.as_secs_f64() * 1e3,
    }
}

/// Runs one planning episode.
///
/// # Safety
/// `planner` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lgls_planner_plan(
    planner: *mut LglsPlanner,
    out: *mut LglsPlanResult,
) -> LglsStatus {
    guard(|| {
        let p = unsafe { planner.as_mut() }.ok_or_else(null)?;
        let out = unsafe { out.as_mut() }.ok_or_else(null)?;
        let r = p.inner.plan().map_err(fail)?;
        p.last_path = r.path.iter().map(|v| v.0).collect();
        *out = result_of(&r);
        Ok(())
    })
}

/// Copies the last planned path into `buf`. `len` always receives the path
/// length; a short buffer yields [`LglsStatus::BufferTooSmall`].
///
/// # Safety
/// `buf` must hold `capacity` values (or be null with zero capacity).
#[no_mangle]
pub unsafe extern "C" fn lgls_planner_path(
    planner: *const LglsPlanner,
    buf: *mut u32,
    capacity: usize,
    len: *mut usize,
) -> LglsStatus {
    guard(|| {
        let p = unsafe { planner.as_ref() }.ok_or_else(null)?;
        let len = unsafe { len.as_mut() }.ok_or_else(null)?;
        *len = p.last_path.len();
        if capacity < p.last_path.len() {
            set_error(format!(
                "path has {} vertices, buffer holds {capacity}",
                p.last_path.len()
            ));
            return Err(LglsStatus::BufferTooSmall);
        }
        if !p.last_path.is_empty() {
            if buf.is_null() {
                return Err(null());
            }
            unsafe { ptr::copy_nonoverlapping(p.last_path.as_ptr(), buf, p.last_path.len()) };
        }
        Ok(())
    })
}

/// Replaces the cost callback, for when the world behind it changes.
///
/// # Safety
/// As for [`lgls_planner_new`].
#[no_mangle]
pub unsafe extern "C" fn lgls_planner_set_oracle(
    planner: *mut LglsPlanner,
    cost: LglsEdgeCostFn,
    user_data: *mut c_void,
) -> LglsStatus {
    guard(|| {
        let p = unsafe { planner.as_mut() }.ok_or_else(null)?;
        let f = cost.ok_or_else(null)?;
        p.inner
            .set_oracle(Box::new(CallbackOracle { f, data: user_data }));
        Ok(())
    })
}

/// Announces `count` changed edges given as `(source, target)` pairs in
/// `edges[0..2 * count]`.
///
/// # Safety
/// `edges` must hold `2 * count` values.
#[no_mangle]
pub unsafe extern "C" fn lgls_planner_notify(
    planner: *mut LglsPlanner,
    edges: *const u32,
    count: usize,
) -> LglsStatus {
    guard(|| {
        let p = unsafe { planner.as_mut() }.ok_or_else(null)?;
        if count > 0 && edges.is_null() {
            return Err(null());
        }
        let raw = if count == 0 {
            &[][..]
        } else {
            unsafe { std::slice::from_raw_parts(edges, 2 * count) }
        };
        let delta = GraphDelta::new(raw.chunks_exact(2).map(|c| Edge::new(c[0], c[1])).collect());
        p.inner.notify_changes(&delta).map_err(fail)
    })
}

/// Total oracle calls made by this planner so far.
///
/// # Safety
/// `planner` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn lgls_planner_eval_count(planner: *const LglsPlanner) -> u64 {
    unsafe { planner.as_ref() }.map_or(0, |p| p.inner.weights().eval_count())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn lgls_status_message(status: LglsStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        LglsStatus::Ok => b"ok\0",
        LglsStatus::NullPointer => b"null pointer argument\0",
        LglsStatus::InvalidArgument => b"invalid argument\0",
        LglsStatus::VertexOutOfRange => b"vertex out of range\0",
        LglsStatus::UnknownEdge => b"unknown edge\0",
        LglsStatus::InvalidWeight => b"invalid edge weight\0",
        LglsStatus::InconsistentHeuristic => b"inconsistent heuristic\0",
        LglsStatus::InvariantViolation => b"internal invariant violated\0",
        LglsStatus::BufferTooSmall => b"buffer too small\0",
        LglsStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Message for the last failure on this thread; valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn lgls_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
