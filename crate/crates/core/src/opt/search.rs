use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use crate::grid::{Dir, Instance, Vertex};

use super::{OptError, OptResult};

/// Largest grid, in vertices, accepted by the exhaustive search by default.
pub const MAX_SEARCH_VERTICES: usize = 24;
/// Hard ceiling of the state encoding.
const STATE_VERTEX_CEILING: usize = 63;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OptOptions {
    /// Require the walk to end at this vertex.
    pub end: Option<Vertex>,
    /// Raise the vertex limit above [`MAX_SEARCH_VERTICES`] (at most 63).
    /// Larger searches may take very long unless the instance is tightly constrained.
    pub vertex_limit: Option<usize>,
}

/// Best-first search over `(position, visited set)` states of one instance.
///
/// Costs of completions from arbitrary states are cached across queries.
pub struct CoverSearch<'a> {
    inst: &'a Instance,
    /// Outgoing arcs per vertex index, in neighbor order.
    arcs: Vec<Vec<(usize, u64)>>,
    full: u64,
    min_w: u64,
    end: Option<usize>,
    /// Distance to the required endpoint, if any.
    to_end: Vec<Option<u64>>,
    cache: FxHashMap<(u64, u8), Option<u64>>,
}

fn key(pos: usize, visited: u64) -> (u64, u8) {
    (visited, pos as u8)
}

impl<'a> CoverSearch<'a> {
    pub fn new(inst: &'a Instance, opts: OptOptions) -> Result<Self, OptError> {
        let spec = inst.spec;
        let nv = spec.vertex_count();
        let max = opts
            .vertex_limit
            .unwrap_or(MAX_SEARCH_VERTICES)
            .min(STATE_VERTEX_CEILING);
        if nv > max {
            return Err(OptError::TooLarge { vertices: nv, max });
        }
        if let Some(e) = opts.end {
            if !spec.contains(e) {
                return Err(OptError::BadEndpoint(e));
            }
        }
        let arcs: Vec<Vec<(usize, u64)>> = spec
            .vertices()
            .map(|u| {
                Dir::ORDER
                    .iter()
                    .filter_map(|d| spec.step(u, *d))
                    .filter_map(|v| inst.traversal(u, v).map(|w| (spec.index(v), w)))
                    .collect()
            })
            .collect();
        let min_w = inst.weights.iter().copied().min().unwrap_or(0);
        let end = opts.end.map(|e| spec.index(e));
        let mut to_end = vec![None; nv];
        if let Some(t) = end {
            // Reverse Dijkstra over the arcs.
            let mut heap = BinaryHeap::new();
            to_end[t] = Some(0);
            heap.push(Reverse((0u64, t)));
            while let Some(Reverse((d, v))) = heap.pop() {
                if to_end[v] != Some(d) {
                    continue;
                }
                for (u, out) in arcs.iter().enumerate() {
                    for &(x, w) in out {
                        if x == v && to_end[u].is_none_or(|old| d + w < old) {
                            to_end[u] = Some(d + w);
                            heap.push(Reverse((d + w, u)));
                        }
                    }
                }
            }
        }
        Ok(CoverSearch {
            inst,
            arcs,
            full: (1u64 << nv) - 1,
            min_w,
            end,
            to_end,
            cache: FxHashMap::default(),
        })
    }

    fn heuristic(&self, pos: usize, visited: u64) -> Option<u64> {
        let missing = u64::from((self.full & !visited).count_ones()) * self.min_w;
        match self.end {
            Some(_) => self.to_end[pos].map(|d| d.max(missing)),
            None => Some(missing),
        }
    }

    fn is_goal(&self, pos: usize, visited: u64) -> bool {
        visited == self.full && self.end.is_none_or(|e| e == pos)
    }

    /// Cheapest cost to finish from `pos` having visited `visited`, or `None`.
    pub fn completion(&mut self, pos: Vertex, visited: &[bool]) -> Option<u64> {
        let spec = self.inst.spec;
        let mask = visited
            .iter()
            .enumerate()
            .filter(|(_, v)| **v)
            .fold(0u64, |m, (i, _)| m | (1 << i));
        self.completion_mask(spec.index(pos), mask | (1 << spec.index(pos)))
    }

    fn completion_mask(&mut self, pos: usize, visited: u64) -> Option<u64> {
        let k0 = key(pos, visited);
        if let Some(c) = self.cache.get(&k0) {
            return *c;
        }
        let result = self.astar(pos, visited);
        self.cache.insert(k0, result);
        result
    }

    fn astar(&self, pos: usize, visited: u64) -> Option<u64> {
        let mut best: FxHashMap<(u64, u8), u64> = FxHashMap::default();
        let mut heap = BinaryHeap::new();
        let h = self.heuristic(pos, visited)?;
        best.insert(key(pos, visited), 0);
        heap.push(Reverse((h, 0u64, pos, visited)));
        while let Some(Reverse((_, g, p, vis))) = heap.pop() {
            if best.get(&key(p, vis)).is_some_and(|b| *b < g) {
                continue;
            }
            if self.is_goal(p, vis) {
                return Some(g);
            }
            for &(q, w) in &self.arcs[p] {
                let nv = vis | (1 << q);
                let ng = g + w;
                let kk = key(q, nv);
                if best.get(&kk).is_some_and(|b| *b <= ng) {
                    continue;
                }
                let Some(h) = self.heuristic(q, nv) else { continue };
                best.insert(kk, ng);
                heap.push(Reverse((ng + h, ng, q, nv)));
            }
        }
        None
    }

    /// Optimal cost and lexicographically smallest optimal walk from the start.
    pub fn solve(&mut self) -> Result<OptResult, OptError> {
        let spec = self.inst.spec;
        let s = spec.index(self.inst.start);
        let mut visited = 1u64 << s;
        let cost = self.completion_mask(s, visited).ok_or(OptError::Infeasible)?;
        let mut witness = vec![self.inst.start];
        let mut pos = s;
        let mut remaining = cost;
        while !self.is_goal(pos, visited) {
            let arcs = self.arcs[pos].clone();
            let (q, w) = arcs
                .into_iter()
                .find(|&(q, w)| {
                    w <= remaining
                        && self.completion_mask(q, visited | (1 << q)) == Some(remaining - w)
                })
                .expect("an optimal continuation exists");
            pos = q;
            visited |= 1 << q;
            remaining -= w;
            witness.push(spec.vertex(q));
        }
        Ok(OptResult { cost, witness })
    }
}

/// Cheapest open walk from the start that visits every vertex.
pub fn optimal_cost(inst: &Instance) -> Result<OptResult, OptError> {
    optimal_cost_with(inst, OptOptions::default())
}

pub fn optimal_cost_with(inst: &Instance, opts: OptOptions) -> Result<OptResult, OptError> {
    let mut search = CoverSearch::new(inst, opts)?;
    if inst.reachable_from_start().iter().any(|r| !r) {
        return Err(OptError::Infeasible);
    }
    search.solve()
}
