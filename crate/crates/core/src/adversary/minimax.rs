//! Exact game value of online exploration over an instance family.
//!
//! The agent plays against an adversary that may answer each revelation
//! with any member of the family still consistent with what the agent has
//! seen. Moving between visited vertices reveals nothing, so the agent's
//! only real decision is which new vertex to enter next; it reaches it over
//! a cheapest route through visited vertices. This makes the game a finite
//! DAG over belief states `(position, visited set, surviving members)`.
//!
//! The value `min_strategy max_member cost / opt` is found by parametric
//! search: for `r = p/q` the quantity
//! `D = min_strategy max_member (q * future_cost - p * opt)` obeys a plain
//! min-max recursion, and `r` is achievable iff `D(root) <= 0`.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::engine::reveal_from_instance;
use crate::grid::{GridSpec, Instance, Orientation, Vertex};
use crate::opt::optimal_cost;
use crate::Ratio;

use super::{AdversaryError, InstanceFamily};

/// Largest family accepted by the search.
pub const MAX_MINIMAX_MEMBERS: usize = 1 << 16;
/// Largest grid accepted by the search.
pub const MAX_MINIMAX_VERTICES: usize = 24;

/// One node of the adversary's decision tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessNode {
    pub depth: usize,
    pub pos: Vertex,
    /// New vertex the agent enters next; `None` at leaves.
    pub next: Option<Vertex>,
    pub survivors: usize,
    /// Worst ratio reachable below this node under the agent's optimal play.
    pub value: Ratio,
}

#[derive(Clone, Debug)]
pub struct MinimaxResult {
    pub value: Ratio,
    /// Pre-order list of decision-tree nodes; several roots if the start
    /// revelation already splits the family.
    pub witness: Vec<WitnessNode>,
    /// Optimal cost per family member.
    pub optimum_table: Vec<u64>,
}

impl MinimaxResult {
    /// `<depth> pos=<r,c> move=<r,c> survivors=<count> value=<p>/<q>`, indented by depth.
    pub fn witness_text(&self) -> String {
        let mut out = String::new();
        for n in &self.witness {
            let mv = match n.next {
                Some(v) => format!("{},{}", v.row, v.col),
                None => "-".to_string(),
            };
            out.push_str(&format!(
                "{}{} pos={},{} move={} survivors={} value={}/{}\n",
                "  ".repeat(n.depth),
                n.depth,
                n.pos.row,
                n.pos.col,
                mv,
                n.survivors,
                n.value.numer(),
                n.value.denom()
            ));
        }
        out
    }
}

type Members = Vec<u64>;

fn singleton_sets(len: usize) -> usize {
    len.div_ceil(64)
}

fn bits(set: &Members) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, word)| {
        (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
    })
}

fn count(set: &Members) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

struct Game<'a> {
    spec: GridSpec,
    members: &'a [Instance],
    opts: Vec<u64>,
    full: u32,
    step_cap: usize,
    /// Interned revelation signature per vertex index and member.
    signature: Vec<Vec<u32>>,
    /// Current parameter `r = p / q`.
    p: i64,
    q: i64,
    memo: FxHashMap<(u8, u32, Members), Option<i64>>,
}

/// What a visit shows about one incident edge.
type Revealed = (usize, Option<u64>, Option<Orientation>);

impl<'a> Game<'a> {
    fn new(family: &'a InstanceFamily, opts: Vec<u64>, step_cap: usize) -> Self {
        let spec = family.spec;
        let nv = spec.vertex_count();
        let signature = spec
            .vertices()
            .map(|v| {
                let mut ids: BTreeMap<Vec<Revealed>, u32> = BTreeMap::new();
                let mut seen = 0u32;
                family
                    .members
                    .iter()
                    .map(|m| {
                        let sig = reveal_from_instance(m, v)
                            .into_iter()
                            .map(|i| (i.edge, i.weight, i.orientation))
                            .collect();
                        *ids.entry(sig).or_insert_with(|| {
                            seen += 1;
                            seen - 1
                        })
                    })
                    .collect()
            })
            .collect();
        Game {
            spec,
            members: &family.members,
            opts,
            full: ((1u64 << nv) - 1) as u32,
            step_cap,
            signature,
            p: 1,
            q: 1,
            memo: FxHashMap::default(),
        }
    }

    fn set_ratio(&mut self, r: Ratio) {
        self.p = *r.numer() as i64;
        self.q = *r.denom() as i64;
        self.memo.clear();
    }

    fn partition(&self, set: &Members, v: usize) -> Vec<Members> {
        let mut classes: BTreeMap<u32, Members> = BTreeMap::new();
        let words = set.len();
        for i in bits(set) {
            let c = classes
                .entry(self.signature[v][i])
                .or_insert_with(|| vec![0; words]);
            c[i / 64] |= 1 << (i % 64);
        }
        classes.into_values().collect()
    }

    /// New vertices enterable from `pos` and the cheapest route cost to each,
    /// using at most `step_cap` moves through visited vertices.
    fn entries(&self, pos: usize, visited: u32, rep: &Instance) -> Vec<(usize, u64)> {
        let spec = self.spec;
        let nv = spec.vertex_count();
        let mut dist: Vec<Option<u64>> = vec![None; nv];
        dist[pos] = Some(0);
        let mut best: Vec<Option<u64>> = vec![None; nv];
        // Bellman-Ford rounds bound the number of moves.
        for round in 0..self.step_cap {
            let mut next = dist.clone();
            for (x, dx) in dist.iter().enumerate() {
                let Some(dx) = *dx else { continue };
                let vx = spec.vertex(x);
                for y in spec.neighbors(vx) {
                    let Some(w) = rep.traversal(vx, y) else { continue };
                    let yi = spec.index(y);
                    if visited >> yi & 1 == 1 {
                        if next[yi].is_none_or(|d| dx + w < d) {
                            next[yi] = Some(dx + w);
                        }
                    } else if best[yi].is_none_or(|d| dx + w < d) {
                        best[yi] = Some(dx + w);
                    }
                }
            }
            if next == dist || round + 1 == self.step_cap {
                break;
            }
            dist = next;
        }
        let mut out: Vec<(usize, u64)> = best
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|d| (i, d)))
            .collect();
        out.sort_by_key(|(i, _)| spec.vertex(*i).col_major_key());
        out
    }

    fn min_opt(&self, set: &Members) -> u64 {
        bits(set).map(|i| self.opts[i]).min().expect("nonempty set")
    }

    fn solve(&mut self, pos: usize, visited: u32, set: &Members) -> Option<i64> {
        if visited == self.full {
            return Some(-self.p * self.min_opt(set) as i64);
        }
        let key = (pos as u8, visited, set.clone());
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let rep = &self.members[bits(set).next().expect("nonempty set")];
        let mut best: Option<i64> = None;
        for (v, travel) in self.entries(pos, visited, rep) {
            let base = self.q * travel as i64;
            let mut worst = Some(i64::MIN);
            for class in self.partition(set, v) {
                if let (Some(b), Some(w)) = (best, worst) {
                    if base + w >= b {
                        break;
                    }
                }
                match self.solve(v, visited | 1 << v, &class) {
                    Some(d) => worst = worst.map(|w| w.max(d)),
                    None => {
                        worst = None;
                        break;
                    }
                }
            }
            if let Some(w) = worst {
                let val = base + w;
                if best.is_none_or(|b| val < b) {
                    best = Some(val);
                }
            }
        }
        self.memo.insert(key, best);
        best
    }

    fn root_classes(&self) -> Vec<Members> {
        let m = self.members.len();
        let mut all = vec![0u64; singleton_sets(m)];
        for i in 0..m {
            all[i / 64] |= 1 << (i % 64);
        }
        let s = self.spec.index(self.members[0].start);
        self.partition(&all, s)
    }

    fn root_value(&mut self) -> Option<i64> {
        let s = self.spec.index(self.members[0].start);
        let mut worst = i64::MIN;
        for class in self.root_classes() {
            worst = worst.max(self.solve(s, 1 << s, &class)?);
        }
        Some(worst)
    }

    fn feasible(&mut self, r: Ratio) -> Option<bool> {
        self.set_ratio(r);
        self.root_value().map(|d| d <= 0)
    }

    /// Agent-optimal play under the current parameter, as a pre-order tree.
    fn tree(
        &mut self,
        depth: usize,
        pos: usize,
        visited: u32,
        set: &Members,
        cost: u64,
        out: &mut Vec<WitnessNode>,
    ) -> Ratio {
        let here = out.len();
        let survivors = count(set);
        out.push(WitnessNode {
            depth,
            pos: self.spec.vertex(pos),
            next: None,
            survivors,
            value: Ratio::from_integer(0),
        });
        let value = if visited == self.full {
            Ratio::new(cost, self.min_opt(set).max(1))
        } else {
            let target = self.solve(pos, visited, set).expect("finite node");
            let rep = &self.members[bits(set).next().expect("nonempty set")];
            let (v, travel) = self
                .entries(pos, visited, rep)
                .into_iter()
                .find(|&(v, travel)| {
                    let classes = self.partition(set, v);
                    let mut worst = i64::MIN;
                    for c in &classes {
                        match self.solve(v, visited | 1 << v, c) {
                            Some(d) => worst = worst.max(d),
                            None => return false,
                        }
                    }
                    self.q * travel as i64 + worst == target
                })
                .expect("an optimal move exists");
            out[here].next = Some(self.spec.vertex(v));
            let mut worst = Ratio::from_integer(0);
            for c in self.partition(set, v) {
                let r = self.tree(depth + 1, v, visited | 1 << v, &c, cost + travel, out);
                worst = worst.max(r);
            }
            worst
        };
        out[here].value = value;
        value
    }
}

/// Optimal deterministic strict competitive ratio over `family`.
///
/// `step_cap` bounds the number of moves of each route between new
/// vertices; the value is only reported if doubling the cap leaves it
/// unchanged.
pub fn minimax_value(family: &InstanceFamily, step_cap: usize) -> Result<MinimaxResult, AdversaryError> {
    let spec = family.spec;
    if family.members.len() > MAX_MINIMAX_MEMBERS || spec.vertex_count() > MAX_MINIMAX_VERTICES {
        return Err(AdversaryError::TooLarge);
    }
    if family.members.is_empty() {
        return Err(AdversaryError::EmptyFamily);
    }
    let opts = family
        .members
        .iter()
        .map(|m| optimal_cost(m).map(|r| r.cost))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| AdversaryError::InfeasibleMember)?;
    let value = solve_value(family, opts.clone(), step_cap.max(1))?;
    let check = solve_value(family, opts.clone(), 2 * step_cap.max(1))?;
    if value.0 != check.0 {
        return Err(AdversaryError::CapNotSlack {
            cap: step_cap,
            value: value.0,
            raised: check.0,
        });
    }
    Ok(MinimaxResult {
        value: value.0,
        witness: value.1,
        optimum_table: opts,
    })
}

fn solve_value(
    family: &InstanceFamily,
    opts: Vec<u64>,
    step_cap: usize,
) -> Result<(Ratio, Vec<WitnessNode>), AdversaryError> {
    if opts.iter().all(|o| *o == 0) {
        // Single vertex: nothing to explore.
        let start = family.start;
        let node = WitnessNode {
            depth: 0,
            pos: start,
            next: None,
            survivors: family.members.len(),
            value: Ratio::from_integer(1),
        };
        return Ok((Ratio::from_integer(1), vec![node]));
    }
    let mut game = Game::new(family, opts, step_cap);
    // The worst-case cost of the cost-minimising strategy bounds the value.
    game.set_ratio(Ratio::new(0, 1));
    let worst_cost = game.root_value().ok_or(AdversaryError::Unwinnable)? as u64;
    let min_opt = *game.opts.iter().min().expect("nonempty");
    let mut opt_values = game.opts.clone();
    opt_values.sort_unstable();
    opt_values.dedup();
    let mut candidates: Vec<Ratio> = opt_values
        .iter()
        .flat_map(|&o| (o..=worst_cost * o / min_opt).map(move |c| Ratio::new(c, o)))
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    if game.feasible(candidates[hi]) != Some(true) {
        return Err(AdversaryError::Unwinnable);
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if game.feasible(candidates[mid]) == Some(true) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let value = candidates[lo];
    game.set_ratio(value);
    let s = game.spec.index(family.start);
    let mut witness = Vec::new();
    let mut top = Ratio::from_integer(0);
    for class in game.root_classes() {
        top = top.max(game.tree(0, s, 1 << s, &class, 0, &mut witness));
    }
    debug_assert_eq!(top, value);
    Ok((value, witness))
}
