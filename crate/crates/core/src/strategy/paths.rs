//! Cheapest paths over revealed edges with the deterministic tie-break.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::engine::Knowledge;
use crate::grid::{Dir, GridSpec, Vertex};

/// A planned route: the vertices after `src`, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownPath {
    pub target: Vertex,
    pub moves: Vec<Vertex>,
    pub cost: u64,
}

/// Which revealed edges a search may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeFilter {
    Any,
    /// Only edges whose revealed weight is at most the bound.
    MaxWeight(u64),
}

impl EdgeFilter {
    fn admits(self, w: u64) -> bool {
        match self {
            EdgeFilter::Any => true,
            EdgeFilter::MaxWeight(b) => w <= b,
        }
    }
}

fn traversal(k: &Knowledge, filter: EdgeFilter, from: Vertex, to: Vertex) -> Option<u64> {
    k.known_traversal(from, to).filter(|w| filter.admits(*w))
}

/// Dijkstra distances from `src` (forward) or to `src` (reverse) over usable edges.
fn distances(k: &Knowledge, filter: EdgeFilter, src: Vertex, reverse: bool) -> Vec<Option<u64>> {
    let spec = k.spec();
    let mut dist = vec![None; spec.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[spec.index(src)] = Some(0);
    heap.push(Reverse((0u64, spec.index(src))));
    while let Some(Reverse((d, i))) = heap.pop() {
        if dist[i] != Some(d) {
            continue;
        }
        let u = spec.vertex(i);
        for v in spec.neighbors(u) {
            let w = if reverse {
                traversal(k, filter, v, u)
            } else {
                traversal(k, filter, u, v)
            };
            let Some(w) = w else { continue };
            let j = spec.index(v);
            let nd = d + w;
            if dist[j].is_none_or(|old| nd < old) {
                dist[j] = Some(nd);
                heap.push(Reverse((nd, j)));
            }
        }
    }
    dist
}

/// Forward distances from `src` over usable revealed edges.
pub fn known_distances(k: &Knowledge, src: Vertex, filter: EdgeFilter) -> Vec<Option<u64>> {
    distances(k, filter, src, false)
}

/// Lexicographically smallest cheapest route from `src` to `target`
/// under the neighbor order Down, Right, Up, Left.
pub fn route_to(k: &Knowledge, src: Vertex, target: Vertex, filter: EdgeFilter) -> Option<KnownPath> {
    let spec: GridSpec = k.spec();
    let to_target = distances(k, filter, target, true);
    let cost = to_target[spec.index(src)]?;
    let mut moves = Vec::new();
    let mut cur = src;
    while cur != target {
        let here = to_target[spec.index(cur)].expect("on a shortest path");
        let next = Dir::ORDER
            .iter()
            .filter_map(|d| spec.step(cur, *d))
            .find(|nb| {
                match (traversal(k, filter, cur, *nb), to_target[spec.index(*nb)]) {
                    (Some(w), Some(rest)) => w + rest == here,
                    _ => false,
                }
            })
            .expect("a shortest path continues");
        moves.push(next);
        cur = next;
    }
    Some(KnownPath { target, moves, cost })
}

/// Cheapest route from `src` to any vertex accepted by `is_target`.
///
/// Among equally cheap targets the one minimising `rank` wins.
pub fn cheapest_to<K: Ord>(
    k: &Knowledge,
    src: Vertex,
    filter: EdgeFilter,
    is_target: impl Fn(Vertex) -> bool,
    rank: impl Fn(Vertex) -> K,
) -> Option<KnownPath> {
    let spec = k.spec();
    let dist = known_distances(k, src, filter);
    let target = spec
        .vertices()
        .filter(|v| is_target(*v))
        .filter_map(|v| dist[spec.index(v)].map(|d| (d, v)))
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| rank(a.1).cmp(&rank(b.1))))?
        .1;
    route_to(k, src, target, filter)
}

/// Cheapest known path from `src` to any of `targets`, ties to the smallest `(col, row)`.
pub fn known_shortest_path(k: &Knowledge, src: Vertex, targets: &[Vertex]) -> Option<KnownPath> {
    cheapest_to(k, src, EdgeFilter::Any, |v| targets.contains(&v), Vertex::col_major_key)
}
