//! Left-to-right sweep for `{1, k}` ladders.
//!
//! The agent advances over weight-1 edges while it can, turns back to
//! cover every unvisited vertex behind its frontier, and then crosses into
//! the next column over the cheapest known route.

use std::cmp::Reverse;
use std::collections::VecDeque;

use crate::engine::{EngineError, Explorer, Knowledge, RevelationSource};
use crate::grid::{EdgeId, Vertex};

use super::paths::{cheapest_to, EdgeFilter, KnownPath};
use super::{Strategy, StrategyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepPhase {
    Advance,
    SweepBack,
    Cross,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepState {
    pub phase: SweepPhase,
    /// Largest column holding a visited vertex.
    pub frontier: u32,
    pub planned: VecDeque<Vertex>,
}

impl Default for SweepState {
    fn default() -> Self {
        SweepState {
            phase: SweepPhase::Advance,
            frontier: 1,
            planned: VecDeque::new(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LadderSweep {
    state: SweepState,
}

impl LadderSweep {
    pub fn new() -> Self {
        LadderSweep::default()
    }

    pub fn state(&self) -> &SweepState {
        &self.state
    }

    fn plan(&mut self, k: &Knowledge) -> Result<KnownPath, StrategyError> {
        let f = self.state.frontier;
        let last = k.spec().cols;
        let prefix_open = k.unvisited().any(|v| v.col <= f);
        // Each phase either plans a leg or hands over; three hand-overs cover every case.
        for _ in 0..3 {
            match self.state.phase {
                SweepPhase::Advance => {
                    if f < last {
                        if let Some(p) = cheapest_to(
                            k,
                            k.position(),
                            EdgeFilter::MaxWeight(1),
                            |v| v.col == f + 1,
                            Vertex::col_major_key,
                        ) {
                            return Ok(p);
                        }
                    }
                    self.state.phase = if prefix_open {
                        SweepPhase::SweepBack
                    } else {
                        SweepPhase::Cross
                    };
                }
                SweepPhase::SweepBack => {
                    if let Some(p) = sweep_back_leg(k, f) {
                        return Ok(p);
                    }
                    if prefix_open {
                        return Err(StrategyError::Stuck);
                    }
                    self.state.phase = SweepPhase::Cross;
                }
                SweepPhase::Cross => {
                    let p = cheapest_to(
                        k,
                        k.position(),
                        EdgeFilter::Any,
                        |v| v.col == f + 1,
                        Vertex::col_major_key,
                    )
                    .ok_or(StrategyError::Stuck)?;
                    self.state.phase = SweepPhase::Advance;
                    return Ok(p);
                }
            }
        }
        Err(StrategyError::Stuck)
    }
}

impl Strategy for LadderSweep {
    fn name(&self) -> &str {
        "sweep"
    }

    fn decide(&mut self, k: &Knowledge) -> Result<Vertex, StrategyError> {
        if k.all_visited() {
            return Err(StrategyError::NothingLeft);
        }
        self.state.frontier = self.state.frontier.max(k.frontier());
        if let Some(&next) = self.state.planned.front() {
            if k.known_traversal(k.position(), next).is_some() {
                self.state.planned.pop_front();
                return Ok(next);
            }
            self.state.planned.clear();
        }
        let path = self.plan(k)?;
        self.state.planned.extend(path.moves);
        self.state.planned.pop_front().ok_or(StrategyError::Stuck)
    }
}

/// Next leg of a sweep-back: the cheapest route to an unvisited vertex in
/// columns `<= frontier`, preferring targets reachable over weight-1 edges
/// and, among equally cheap targets, the rightmost one.
pub fn sweep_back_leg(k: &Knowledge, frontier: u32) -> Option<KnownPath> {
    let open = |v: Vertex| v.col <= frontier && !k.is_visited(v);
    let rank = |v: Vertex| (Reverse(v.col), v.row);
    cheapest_to(k, k.position(), EdgeFilter::MaxWeight(1), open, rank)
        .or_else(|| cheapest_to(k, k.position(), EdgeFilter::Any, open, rank))
}

/// Runs sweep-back legs on `explorer` until every vertex in the columns up
/// to the current frontier is visited. Returns the vertices walked.
pub fn sweep_back_plan<S: RevelationSource>(
    explorer: &mut Explorer<S>,
) -> Result<Vec<Vertex>, EngineError> {
    let frontier = explorer.knowledge().frontier();
    let mut walked = Vec::new();
    while explorer.knowledge().unvisited().any(|v| v.col <= frontier) {
        let leg = sweep_back_leg(explorer.knowledge(), frontier).ok_or_else(|| {
            EngineError::StrategyStuck {
                strategy: "sweep".to_string(),
                position: explorer.knowledge().position(),
                reason: StrategyError::Stuck,
            }
        })?;
        for v in leg.moves {
            explorer.apply_move(v)?;
            walked.push(v);
        }
    }
    Ok(walked)
}

/// A set of revealed heavy edges cutting the ladder into a left and a right part.
///
/// The left part is the top row up to column `top` and the bottom row up to
/// column `bottom`; the cut holds the two row edges leaving it and the rungs
/// between the two boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSeparator {
    pub top: u32,
    pub bottom: u32,
    pub edges: Vec<EdgeId>,
}

/// Smallest fully revealed cut of weight-`heavy` edges, if any.
pub fn detect_k_separator(k: &Knowledge, heavy: u64) -> Option<KSeparator> {
    let spec = k.spec();
    if !spec.is_ladder() || spec.cols < 2 {
        return None;
    }
    let n = spec.cols;
    let heavy_edge = |u: Vertex, v: Vertex| {
        let e = spec.edge_between(u, v)?;
        (k.weight(e) == Some(heavy)).then(|| spec.edge(e))
    };
    let mut best: Option<KSeparator> = None;
    for top in 1..n {
        for bottom in 1..n {
            let (lo, hi) = (top.min(bottom), top.max(bottom));
            let mut edges = Vec::new();
            let mut ok = true;
            let mut add = |e: Option<EdgeId>| match e {
                Some(e) => edges.push(e),
                None => ok = false,
            };
            add(heavy_edge(Vertex::new(1, top), Vertex::new(1, top + 1)));
            add(heavy_edge(Vertex::new(2, bottom), Vertex::new(2, bottom + 1)));
            for c in lo + 1..=hi {
                add(heavy_edge(Vertex::new(1, c), Vertex::new(2, c)));
            }
            if !ok {
                continue;
            }
            let key = |s: &KSeparator| (s.edges.len(), s.top.min(s.bottom), s.top);
            let cand = KSeparator { top, bottom, edges };
            if best.as_ref().is_none_or(|b| key(&cand) < key(b)) {
                best = Some(cand);
            }
        }
    }
    best
}
