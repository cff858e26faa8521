//! Column-by-column dynamic program for undirected ladders.
//!
//! A covering walk from `s` is an Euler trail of a connected spanning
//! multigraph in which every edge appears at most twice and either no
//! vertex has odd degree, or exactly two do and `s` is one of them. The
//! program chooses edge multiplicities column by column, carrying the
//! multiplicities of the two edges into the next column, whether the two
//! partial components touching that column are already joined, and the
//! parity bookkeeping.

use rustc_hash::FxHashMap;

use crate::grid::{Instance, Vertex};

use super::OptError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct State {
    /// Multiplicities of the top and bottom edges entering the column.
    top_in: u8,
    bottom_in: u8,
    /// Both entering edges hang off one component already.
    joined: bool,
    /// Odd-degree vertices other than the start, capped at 1.
    odd_others: u8,
    start_odd: bool,
}

/// Minimal covering-walk cost of an undirected `2 x n` instance.
pub fn ladder_profile_opt(inst: &Instance) -> Result<u64, OptError> {
    let spec = inst.spec;
    if !spec.is_ladder() || spec.directed {
        return Err(OptError::NotALadder);
    }
    let n = spec.cols;
    let w = |a: Vertex, b: Vertex| inst.weights[spec.edge_between(a, b).expect("adjacent")];
    let s = inst.start;

    let mut layer: FxHashMap<State, u64> = FxHashMap::default();
    layer.insert(
        State {
            top_in: 0,
            bottom_in: 0,
            joined: false,
            odd_others: 0,
            start_odd: false,
        },
        0,
    );
    for c in 1..=n {
        let last = c == n;
        let rung_w = w(Vertex::new(1, c), Vertex::new(2, c));
        let (top_w, bottom_w) = if last {
            (0, 0)
        } else {
            (
                w(Vertex::new(1, c), Vertex::new(1, c + 1)),
                w(Vertex::new(2, c), Vertex::new(2, c + 1)),
            )
        };
        let outs: &[u8] = if last { &[0] } else { &[0, 1, 2] };
        let mut next: FxHashMap<State, u64> = FxHashMap::default();
        for (st, cost) in &layer {
            for r in 0..=2u8 {
                for &bt in outs {
                    for &bb in outs {
                        let top_deg = st.top_in + r + bt;
                        let bottom_deg = st.bottom_in + r + bb;
                        if top_deg == 0 || bottom_deg == 0 {
                            continue;
                        }
                        let same = r > 0 || (st.top_in > 0 && st.bottom_in > 0 && st.joined);
                        // A component that stops here must be the only one.
                        let closes = if last { true } else { bt == 0 || bb == 0 };
                        if closes && !same {
                            continue;
                        }
                        if !last && bt == 0 && bb == 0 {
                            continue;
                        }
                        let mut odd_others = st.odd_others;
                        let mut start_odd = st.start_odd;
                        let mut ok = true;
                        for (row, deg) in [(1, top_deg), (2, bottom_deg)] {
                            if deg % 2 == 1 {
                                if Vertex::new(row, c) == s {
                                    start_odd = true;
                                } else if odd_others == 0 {
                                    odd_others = 1;
                                } else {
                                    ok = false;
                                }
                            }
                        }
                        if !ok {
                            continue;
                        }
                        let added = u64::from(r) * rung_w
                            + u64::from(bt) * top_w
                            + u64::from(bb) * bottom_w;
                        let ns = State {
                            top_in: bt,
                            bottom_in: bb,
                            joined: same,
                            odd_others,
                            start_odd,
                        };
                        let total = cost + added;
                        let slot = next.entry(ns).or_insert(u64::MAX);
                        *slot = (*slot).min(total);
                    }
                }
            }
        }
        layer = next;
    }
    layer
        .iter()
        .filter(|(st, _)| st.odd_others == u8::from(st.start_odd))
        .map(|(_, c)| *c)
        .min()
        .ok_or(OptError::Infeasible)
}
