//! Fog-of-war exploration engine.
//!
//! The engine owns the agent's [`Knowledge`] and consults a
//! [`RevelationSource`] whenever a vertex is visited for the first time.
//! Undirected grids reveal the weights of every incident edge. Directed
//! grids reveal the orientation of every incident edge, and the weight of
//! the edges leaving the visited vertex.

use std::io;

use thiserror::Error;

use crate::grid::{GridSpec, Instance, Orientation, Vertex};
use crate::strategy::{Strategy, StrategyError};
use crate::Ratio;

/// What a source tells the agent about one incident edge of a newly visited vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeInfo {
    pub edge: usize,
    /// Present on directed grids.
    pub orientation: Option<Orientation>,
    /// Present whenever the revelation rule entitles the agent to it.
    pub weight: Option<u64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SourceError {
    #[error("{0}")]
    Inconsistent(String),
}

/// Supplier of ground truth, possibly committing lazily.
///
/// Answers must be consistent: repeated questions about an edge get the
/// same answer, and [`RevelationSource::commit`] agrees with all of them.
pub trait RevelationSource {
    fn spec(&self) -> GridSpec;

    /// Information about the edges incident to `v`, called on its first visit.
    fn incident_info(&mut self, v: Vertex) -> Result<Vec<EdgeInfo>, SourceError>;

    /// The fully committed instance.
    fn commit(&mut self) -> Instance;
}

impl<S: RevelationSource + ?Sized> RevelationSource for &mut S {
    fn spec(&self) -> GridSpec {
        (**self).spec()
    }

    fn incident_info(&mut self, v: Vertex) -> Result<Vec<EdgeInfo>, SourceError> {
        (**self).incident_info(v)
    }

    fn commit(&mut self) -> Instance {
        (**self).commit()
    }
}

/// Revelation rule shared by every source backed by a concrete instance.
pub fn reveal_from_instance(inst: &Instance, v: Vertex) -> Vec<EdgeInfo> {
    inst.spec
        .incident(v)
        .map(|(e, _)| {
            let orientation = inst.orientation_of(e);
            let entitled = match orientation {
                Some(o) => inst.spec.edge(e).tail(o) == v,
                None => true,
            };
            EdgeInfo {
                edge: e,
                orientation,
                weight: entitled.then(|| inst.weights[e]),
            }
        })
        .collect()
}

/// A fixed instance, fully committed up front.
#[derive(Clone, Debug)]
pub struct StaticSource {
    instance: Instance,
}

impl StaticSource {
    pub fn new(instance: Instance) -> Self {
        StaticSource { instance }
    }
}

impl RevelationSource for StaticSource {
    fn spec(&self) -> GridSpec {
        self.instance.spec
    }

    fn incident_info(&mut self, v: Vertex) -> Result<Vec<EdgeInfo>, SourceError> {
        Ok(reveal_from_instance(&self.instance, v))
    }

    fn commit(&mut self) -> Instance {
        self.instance.clone()
    }
}

/// Draws each edge's `(weight, orientation)` from a closure the first time
/// the edge is touched by a revelation; untouched edges are drawn at commit.
pub struct LazySource<F> {
    spec: GridSpec,
    start: Vertex,
    k: Option<u64>,
    draw: F,
    drawn: Vec<Option<(u64, Option<Orientation>)>>,
}

impl<F> LazySource<F>
where
    F: FnMut(usize) -> (u64, Option<Orientation>),
{
    pub fn new(spec: GridSpec, start: Vertex, k: Option<u64>, draw: F) -> Self {
        LazySource {
            spec,
            start,
            k,
            draw,
            drawn: vec![None; spec.edge_count()],
        }
    }

    fn get(&mut self, e: usize) -> (u64, Option<Orientation>) {
        if let Some(d) = self.drawn[e] {
            return d;
        }
        let d = (self.draw)(e);
        self.drawn[e] = Some(d);
        d
    }

    /// Number of edges committed so far.
    pub fn committed_edges(&self) -> usize {
        self.drawn.iter().filter(|d| d.is_some()).count()
    }
}

impl<F> RevelationSource for LazySource<F>
where
    F: FnMut(usize) -> (u64, Option<Orientation>),
{
    fn spec(&self) -> GridSpec {
        self.spec
    }

    fn incident_info(&mut self, v: Vertex) -> Result<Vec<EdgeInfo>, SourceError> {
        let spec = self.spec;
        let mut out = Vec::new();
        for (e, _) in spec.incident(v) {
            let (w, o) = self.get(e);
            let entitled = o.is_none_or(|o| spec.edge(e).tail(o) == v);
            out.push(EdgeInfo {
                edge: e,
                orientation: o,
                weight: entitled.then_some(w),
            });
        }
        Ok(out)
    }

    fn commit(&mut self) -> Instance {
        let n = self.spec.edge_count();
        let drawn: Vec<_> = (0..n).map(|e| self.get(e)).collect();
        Instance {
            spec: self.spec,
            weights: drawn.iter().map(|d| d.0).collect(),
            orientation: self
                .spec
                .directed
                .then(|| drawn.iter().map(|d| d.1.unwrap_or(Orientation::Forward)).collect()),
            start: self.start,
            k: self.k,
        }
    }
}

/// The agent-visible projection of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Knowledge {
    spec: GridSpec,
    start: Vertex,
    position: Vertex,
    visited: Vec<bool>,
    visited_count: usize,
    weights: Vec<Option<u64>>,
    orientations: Vec<Option<Orientation>>,
    move_count: u64,
    cum_cost: u64,
}

impl Knowledge {
    fn new(spec: GridSpec, start: Vertex) -> Self {
        Knowledge {
            spec,
            start,
            position: start,
            visited: vec![false; spec.vertex_count()],
            visited_count: 0,
            weights: vec![None; spec.edge_count()],
            orientations: vec![None; spec.edge_count()],
            move_count: 0,
            cum_cost: 0,
        }
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn start(&self) -> Vertex {
        self.start
    }

    pub fn position(&self) -> Vertex {
        self.position
    }

    pub fn move_count(&self) -> u64 {
        self.move_count
    }

    pub fn cum_cost(&self) -> u64 {
        self.cum_cost
    }

    pub fn is_visited(&self, v: Vertex) -> bool {
        self.visited[self.spec.index(v)]
    }

    pub fn visited_count(&self) -> usize {
        self.visited_count
    }

    pub fn all_visited(&self) -> bool {
        self.visited_count == self.spec.vertex_count()
    }

    pub fn visited_mask(&self) -> &[bool] {
        &self.visited
    }

    pub fn unvisited(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.spec.vertices().filter(|v| !self.is_visited(*v))
    }

    /// Largest column holding a visited vertex.
    pub fn frontier(&self) -> u32 {
        self.spec
            .vertices()
            .filter(|v| self.is_visited(*v))
            .map(|v| v.col)
            .max()
            .unwrap_or(self.start.col)
    }

    pub fn weight(&self, edge: usize) -> Option<u64> {
        self.weights[edge]
    }

    pub fn orientation(&self, edge: usize) -> Option<Orientation> {
        self.orientations[edge]
    }

    pub fn revealed_weights(&self) -> &[Option<u64>] {
        &self.weights
    }

    pub fn revealed_orientations(&self) -> &[Option<Orientation>] {
        &self.orientations
    }

    /// Whether the move `from -> to` is known to be permitted by the orientation.
    pub fn direction_allows(&self, from: Vertex, to: Vertex) -> bool {
        let Some(e) = self.spec.edge_between(from, to) else {
            return false;
        };
        if !self.spec.directed {
            return true;
        }
        self.orientations[e].is_some_and(|o| self.spec.edge(e).tail(o) == from)
    }

    /// Weight of `from -> to` if both the weight and the permission are known.
    pub fn known_traversal(&self, from: Vertex, to: Vertex) -> Option<u64> {
        let e = self.spec.edge_between(from, to)?;
        let w = self.weights[e]?;
        self.direction_allows(from, to).then_some(w)
    }

    fn absorb(&mut self, v: Vertex, info: &[EdgeInfo]) -> Result<(), EngineError> {
        let spec = self.spec;
        for i in info {
            let id = spec.edge(i.edge);
            if id.first() != v && id.second() != v {
                return Err(EngineError::AdversaryInconsistent(format!(
                    "edge {id} reported for {v} is not incident to it"
                )));
            }
            if spec.directed != i.orientation.is_some() {
                return Err(EngineError::AdversaryInconsistent(format!(
                    "orientation presence mismatch on {id}"
                )));
            }
            if let Some(o) = i.orientation {
                match self.orientations[i.edge] {
                    Some(prev) if prev != o => {
                        return Err(EngineError::AdversaryInconsistent(format!(
                            "orientation of {id} changed"
                        )))
                    }
                    _ => self.orientations[i.edge] = Some(o),
                }
            }
            let entitled = i.orientation.is_none_or(|o| id.tail(o) == v);
            match (entitled, i.weight) {
                (true, None) => {
                    return Err(EngineError::AdversaryInconsistent(format!(
                        "weight of {id} withheld"
                    )))
                }
                (true, Some(w)) => {
                    if w == 0 {
                        return Err(EngineError::AdversaryInconsistent(format!(
                            "non-positive weight on {id}"
                        )));
                    }
                    match self.weights[i.edge] {
                        Some(prev) if prev != w => {
                            return Err(EngineError::AdversaryInconsistent(format!(
                                "weight of {id} changed from {prev} to {w}"
                            )))
                        }
                        _ => self.weights[i.edge] = Some(w),
                    }
                }
                // Extra information is ignored so knowledge follows the rule exactly.
                (false, _) => {}
            }
        }
        let mut incident: Vec<usize> = spec.incident(v).map(|(e, _)| e).collect();
        let mut reported: Vec<usize> = info.iter().map(|i| i.edge).collect();
        incident.sort_unstable();
        reported.sort_unstable();
        reported.dedup();
        if incident != reported {
            return Err(EngineError::AdversaryInconsistent(format!(
                "incomplete revelation at {v}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("start {0} lies outside the grid")]
    StartOutOfBounds(Vertex),
    #[error("illegal move {from} -> {to}")]
    IllegalMove { from: Vertex, to: Vertex },
    #[error("revelation source is inconsistent: {0}")]
    AdversaryInconsistent(String),
    #[error("strategy `{strategy}` is stuck at {position}: {reason}")]
    StrategyStuck {
        strategy: String,
        position: Vertex,
        reason: StrategyError,
    },
    #[error("dead end at {0}: no outgoing arc")]
    DeadEnd(Vertex),
}

impl From<SourceError> for EngineError {
    fn from(e: SourceError) -> Self {
        EngineError::AdversaryInconsistent(e.to_string())
    }
}

/// One move of a walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub from: Vertex,
    pub to: Vertex,
    pub weight: u64,
}

/// The agent's walk and its cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub label: String,
    pub start: Vertex,
    pub steps: Vec<Step>,
    pub total_cost: u64,
    pub complete: bool,
}

impl Trace {
    /// Vertex sequence of the walk, starting at the start vertex.
    pub fn walk(&self) -> Vec<Vertex> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|s| s.to))
            .collect()
    }

    /// Number of moves over an edge of weight `heavy`.
    pub fn heavy_moves(&self, heavy: u64) -> usize {
        self.steps.iter().filter(|s| s.weight == heavy).count()
    }

    /// Builds a trace from a walk on a known instance.
    pub fn from_walk(label: &str, inst: &Instance, walk: &[Vertex]) -> Option<Trace> {
        let start = *walk.first()?;
        let mut steps = Vec::with_capacity(walk.len().saturating_sub(1));
        for w in walk.windows(2) {
            steps.push(Step {
                from: w[0],
                to: w[1],
                weight: inst.traversal(w[0], w[1])?,
            });
        }
        let mut seen = vec![false; inst.spec.vertex_count()];
        for v in walk {
            seen[inst.spec.index(*v)] = true;
        }
        Some(Trace {
            label: label.to_string(),
            start,
            total_cost: steps.iter().map(|s| s.weight).sum(),
            steps,
            complete: seen.iter().all(|s| *s),
        })
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(TRACE_HEADER)?;
        let mut cum = 0u64;
        for (i, s) in self.steps.iter().enumerate() {
            cum += s.weight;
            w.write_record([
                (i + 1).to_string(),
                s.from.row.to_string(),
                s.from.col.to_string(),
                s.to.row.to_string(),
                s.to.col.to_string(),
                s.weight.to_string(),
                cum.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

pub const TRACE_HEADER: [&str; 7] = [
    "step", "from_row", "from_col", "to_row", "to_col", "weight", "cum_cost",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceCsvError {
    #[error("malformed csv: {0}")]
    Csv(String),
    #[error("unexpected header")]
    BadHeader,
    #[error("row {row}: {msg}")]
    BadRow { row: usize, msg: String },
}

/// Parses and checks a trace CSV: step numbering, walk continuity and running cost.
pub fn parse_trace_csv(bytes: &[u8]) -> Result<Vec<Step>, TraceCsvError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    let header = rdr
        .headers()
        .map_err(|e| TraceCsvError::Csv(e.to_string()))?;
    if header.iter().ne(TRACE_HEADER) {
        return Err(TraceCsvError::BadHeader);
    }
    let mut steps: Vec<Step> = Vec::new();
    let mut cum: u64 = 0;
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| TraceCsvError::Csv(e.to_string()))?;
        let bad = |msg: &str| TraceCsvError::BadRow {
            row,
            msg: msg.to_string(),
        };
        if rec.len() != TRACE_HEADER.len() {
            return Err(bad("wrong field count"));
        }
        let f: Vec<u64> = rec
            .iter()
            .map(|s| s.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("non-integer field"))?;
        if f[0] != row as u64 {
            return Err(bad("step numbers must count up from 1"));
        }
        let coord = |x: u64| u32::try_from(x).map_err(|_| bad("coordinate out of range"));
        let from = Vertex::new(coord(f[1])?, coord(f[2])?);
        let to = Vertex::new(coord(f[3])?, coord(f[4])?);
        if from.row.abs_diff(to.row) + from.col.abs_diff(to.col) != 1 {
            return Err(bad("endpoints are not adjacent"));
        }
        if let Some(prev) = steps.last() {
            if prev.to != from {
                return Err(bad("walk is not connected"));
            }
        }
        if f[5] == 0 {
            return Err(bad("non-positive weight"));
        }
        cum = cum.checked_add(f[5]).ok_or_else(|| bad("cost overflow"))?;
        if f[6] != cum {
            return Err(bad("cum_cost does not match the running sum"));
        }
        steps.push(Step {
            from,
            to,
            weight: f[5],
        });
    }
    Ok(steps)
}

/// Engine state: the knowledge plus the move log, advancing over a source.
pub struct Explorer<S> {
    source: S,
    knowledge: Knowledge,
    steps: Vec<Step>,
}

impl<S: RevelationSource> Explorer<S> {
    /// Places the agent at `start` and applies the revelation there.
    pub fn new(mut source: S, start: Vertex) -> Result<Self, EngineError> {
        let spec = source.spec();
        if !spec.contains(start) {
            return Err(EngineError::StartOutOfBounds(start));
        }
        let mut knowledge = Knowledge::new(spec, start);
        let info = source.incident_info(start)?;
        knowledge.absorb(start, &info)?;
        knowledge.visited[spec.index(start)] = true;
        knowledge.visited_count = 1;
        Ok(Explorer {
            source,
            knowledge,
            steps: Vec::new(),
        })
    }

    pub fn knowledge(&self) -> &Knowledge {
        &self.knowledge
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    /// Neighbors the agent may move to from its position.
    pub fn legal_moves(&self) -> Vec<Vertex> {
        let k = &self.knowledge;
        k.spec
            .neighbors(k.position)
            .filter(|u| k.direction_allows(k.position, *u))
            .collect()
    }

    pub fn apply_move(&mut self, to: Vertex) -> Result<Step, EngineError> {
        let from = self.knowledge.position;
        let k = &self.knowledge;
        let e = k
            .spec
            .edge_between(from, to)
            .filter(|_| k.spec.contains(to) && k.direction_allows(from, to))
            .ok_or(EngineError::IllegalMove { from, to })?;
        // Both rules make the traversed weight known: the edge leaves a visited vertex.
        let weight = k.weights[e].ok_or_else(|| {
            EngineError::AdversaryInconsistent(format!("weight of traversed edge {from}->{to} unknown"))
        })?;
        let idx = k.spec.index(to);
        if !k.visited[idx] {
            let info = self.source.incident_info(to)?;
            self.knowledge.absorb(to, &info)?;
            self.knowledge.visited[idx] = true;
            self.knowledge.visited_count += 1;
        }
        let k = &mut self.knowledge;
        k.position = to;
        k.move_count += 1;
        k.cum_cost += weight;
        let step = Step { from, to, weight };
        self.steps.push(step);
        Ok(step)
    }

    /// Ends the run, returning the trace and the committed ground truth.
    pub fn finish(mut self, label: &str) -> (Trace, Instance) {
        let trace = Trace {
            label: label.to_string(),
            start: self.knowledge.start,
            total_cost: self.knowledge.cum_cost,
            complete: self.knowledge.all_visited(),
            steps: self.steps,
        };
        (trace, self.source.commit())
    }
}

/// Default cap on moves: `10 * k * m * n`.
pub fn default_step_budget(spec: &GridSpec, k: u64) -> u64 {
    10 * k.max(1) * spec.vertex_count() as u64
}

/// A finished run and the ground truth it was played against.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub trace: Trace,
    pub instance: Instance,
}

/// Drives `strategy` until every vertex is visited or the budget runs out.
pub fn run<S, T>(
    source: S,
    start: Vertex,
    strategy: &mut T,
    step_budget: u64,
) -> Result<RunOutcome, EngineError>
where
    S: RevelationSource,
    T: Strategy + ?Sized,
{
    let mut ex = Explorer::new(source, start)?;
    let mut steps = 0;
    while !ex.knowledge.all_visited() && steps < step_budget {
        if ex.legal_moves().is_empty() {
            return Err(EngineError::DeadEnd(ex.knowledge.position));
        }
        let to = strategy
            .decide(&ex.knowledge)
            .map_err(|reason| EngineError::StrategyStuck {
                strategy: strategy.name().to_string(),
                position: ex.knowledge.position,
                reason,
            })?;
        ex.apply_move(to)?;
        steps += 1;
    }
    let (trace, instance) = ex.finish(strategy.name());
    Ok(RunOutcome { trace, instance })
}

/// Convenience wrapper: runs against a static instance with the default budget.
pub fn run_on<T: Strategy + ?Sized>(inst: &Instance, strategy: &mut T) -> Result<RunOutcome, EngineError> {
    let k = inst.k.unwrap_or_else(|| inst.weights.iter().copied().max().unwrap_or(1));
    run(
        StaticSource::new(inst.clone()),
        inst.start,
        strategy,
        default_step_budget(&inst.spec, k),
    )
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatioError {
    #[error("trace is incomplete")]
    IncompleteTrace,
    #[error("optimum is zero but the agent paid {0}")]
    ZeroOptimum(u64),
}

/// Exact strict ratio `alg / opt`. A zero-cost optimum (single vertex) scores 1.
pub fn strict_ratio(alg: u64, opt: u64) -> Result<Ratio, RatioError> {
    match (alg, opt) {
        (0, 0) => Ok(Ratio::from_integer(1)),
        (a, 0) => Err(RatioError::ZeroOptimum(a)),
        (a, o) => Ok(Ratio::new(a, o)),
    }
}

/// Strict competitive ratio of a complete trace against the offline optimum.
pub fn trace_ratio(trace: &Trace, opt: &crate::opt::OptResult) -> Result<Ratio, RatioError> {
    if !trace.complete {
        return Err(RatioError::IncompleteTrace);
    }
    strict_ratio(trace.total_cost, opt.cost)
}
