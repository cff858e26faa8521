//! Directed `{1, k}` grids on which the greedy agent loops back to its
//! start over and over, paying for the same heavy edges each time.
//!
//! Every generator simulates greedy on its output and replays an explicit
//! covering walk before returning; a mismatch is reported instead of a
//! silently different instance.

use crate::engine::run_on;
use crate::grid::{GridSpec, Instance, Vertex};
use crate::strategy::Greedy;
use crate::Ratio;

use super::AdversaryError;

/// Rows per block of the square trap.
pub const SQUARE_BLOCK_ROWS: u32 = 5;

/// A generated trap with the evidence it was checked against.
#[derive(Clone, Debug)]
pub struct VerifiedTrap {
    pub instance: Instance,
    /// Covering walk from the start.
    pub witness: Vec<Vertex>,
    pub witness_cost: u64,
    pub witness_heavy: usize,
    pub greedy_cost: u64,
    pub greedy_heavy: usize,
}

impl VerifiedTrap {
    /// Greedy cost over the witness cost; a lower bound on greedy's strict ratio.
    pub fn ratio_lower_bound(&self) -> Ratio {
        Ratio::new(self.greedy_cost, self.witness_cost.max(1))
    }
}

fn v(r: u32, c: u32) -> Vertex {
    Vertex::new(r, c)
}

fn arc(g: &mut Instance, from: Vertex, to: Vertex, w: u64) {
    g.set_arc(from, to);
    g.set_weight(from, to, w);
}

fn verify(instance: Instance, witness: Vec<Vertex>, k: u64) -> Result<VerifiedTrap, AdversaryError> {
    let failed = |why: &str| AdversaryError::ReconstructionFailed(why.to_string());
    let run = run_on(&instance, &mut Greedy).map_err(|e| failed(&e.to_string()))?;
    if !run.trace.complete {
        return Err(failed("greedy did not finish"));
    }
    let witness_cost = instance
        .walk_cost(&witness)
        .ok_or_else(|| failed("witness is not a legal walk"))?;
    let mut seen = vec![false; instance.spec.vertex_count()];
    for w in &witness {
        seen[instance.spec.index(*w)] = true;
    }
    if witness.first() != Some(&instance.start) || seen.iter().any(|s| !s) {
        return Err(failed("witness does not cover the grid from the start"));
    }
    Ok(VerifiedTrap {
        witness_heavy: instance.heavy_traversals(&witness, k),
        witness_cost,
        witness,
        greedy_cost: run.trace.total_cost,
        greedy_heavy: run.trace.heavy_moves(k),
        instance,
    })
}

/// Two-row trap: the top row runs right with heavy edges after its first
/// edge, the bottom row runs left, rungs point down except the first,
/// which leads back up to the start.
pub fn trap_ladder(n: u32, k: u64) -> Instance {
    let mut g = Instance::all_ones(GridSpec::new(2, n, true).expect("positive size")).with_k(k);
    for j in 1..n {
        arc(&mut g, v(1, j), v(1, j + 1), if j == 1 { 1 } else { k });
        arc(&mut g, v(2, j + 1), v(2, j), 1);
    }
    arc(&mut g, v(2, 1), v(1, 1), 1);
    for j in 2..=n {
        arc(&mut g, v(1, j), v(2, j), 1);
    }
    g
}

/// Along the top row, down the last rung, back along the bottom row.
///
/// Optimal: each heavy top edge is the only way into its head, so any
/// covering walk pays all `n - 2` of them plus at least `n + 1` more moves.
pub fn trap_ladder_witness(n: u32) -> Vec<Vertex> {
    (1..=n).map(|c| v(1, c)).chain((1..=n).rev().map(|c| v(2, c))).collect()
}

/// Optimal cost of [`trap_ladder`]: `(n - 2) k + n + 1`.
pub fn trap_ladder_opt(n: u32, k: u64) -> u64 {
    u64::from(n - 2) * k + u64::from(n) + 1
}

/// Builds the two-row trap and checks that greedy crosses
/// `(n - 2)(n - 1) / 2` heavy edges against the optimum's `n - 2`.
pub fn gen_greedy_trap_ladder(n: u32, k: u64) -> Result<VerifiedTrap, AdversaryError> {
    if n < 4 {
        return Err(AdversaryError::BadTrapSize(n));
    }
    let t = verify(trap_ladder(n, k), trap_ladder_witness(n), k)?;
    let loops = ((n - 2) * (n - 1) / 2) as usize;
    if t.greedy_heavy != loops || t.witness_heavy != (n - 2) as usize {
        return Err(AdversaryError::ReconstructionFailed(format!(
            "heavy counts greedy {} / witness {}, expected {loops} / {}",
            t.greedy_heavy,
            t.witness_heavy,
            n - 2
        )));
    }
    Ok(t)
}

/// One five-row block of the square trap with top row `r0`.
///
/// Rows `r0, r0+1` form a two-row trap whose whole top row is heavy;
/// rows `r0+2, r0+3` form the mirrored trap entered from the last column;
/// row `r0+4` runs left. Each pair of bands is linked by a single heavy
/// downward arc in the last column; every other vertical arc points up.
fn square_block(g: &mut Instance, r0: u32, n: u32, k: u64) {
    let (a, b, c, d, e) = (r0, r0 + 1, r0 + 2, r0 + 3, r0 + 4);
    let far = |j: u32| if j + 2 < n { k } else { 1 };
    for j in 1..n {
        arc(g, v(a, j), v(a, j + 1), k);
        arc(g, v(b, j + 1), v(b, j), 1);
        arc(g, v(c, j + 1), v(c, j), far(j));
        arc(g, v(d, j), v(d, j + 1), 1);
        arc(g, v(e, j + 1), v(e, j), far(j));
    }
    for j in 1..=n {
        if j == 1 {
            arc(g, v(b, 1), v(a, 1), 1);
        } else {
            arc(g, v(a, j), v(b, j), 1);
        }
        if j == n {
            arc(g, v(d, n), v(c, n), 1);
            arc(g, v(b, n), v(c, n), k);
            arc(g, v(d, n), v(e, n), k);
        } else {
            arc(g, v(c, j), v(d, j), 1);
            arc(g, v(c, j), v(b, j), 1);
            arc(g, v(e, j), v(d, j), 1);
        }
    }
}

/// Square trap made of `n / 5` stacked blocks; block `i + 1` is entered
/// from the bottom-left corner of block `i`.
pub fn trap_square(n: u32, k: u64) -> Result<Instance, AdversaryError> {
    if n < SQUARE_BLOCK_ROWS || !n.is_multiple_of(SQUARE_BLOCK_ROWS) {
        return Err(AdversaryError::BadTrapSize(n));
    }
    let mut g = Instance::all_ones(GridSpec::directed(n, n)).with_k(k);
    let blocks = n / SQUARE_BLOCK_ROWS;
    for b in 0..blocks {
        let r0 = 1 + b * SQUARE_BLOCK_ROWS;
        square_block(&mut g, r0, n, k);
        if b + 1 < blocks {
            let last = r0 + SQUARE_BLOCK_ROWS - 1;
            for j in 1..=n {
                if j == 1 {
                    arc(&mut g, v(last, 1), v(last + 1, 1), 1);
                } else {
                    arc(&mut g, v(last + 1, j), v(last, j), 1);
                }
            }
        }
    }
    Ok(g)
}

/// Covering walk for [`trap_square`].
///
/// The last block is covered with each heavy edge used once, ending at the
/// left end of its second row. Earlier blocks must be left from their
/// bottom-left corner, so their top row is walked twice.
pub fn trap_square_witness(n: u32) -> Vec<Vertex> {
    let blocks = n / SQUARE_BLOCK_ROWS;
    let mut walk = Vec::new();
    for blk in 0..blocks {
        let r0 = 1 + blk * SQUARE_BLOCK_ROWS;
        let (a, b, c, d, e) = (r0, r0 + 1, r0 + 2, r0 + 3, r0 + 4);
        let row = |r: u32, rightward: bool| -> Vec<Vertex> {
            if rightward {
                (1..=n).map(|j| v(r, j)).collect()
            } else {
                (1..=n).rev().map(|j| v(r, j)).collect()
            }
        };
        let last = blk + 1 == blocks;
        walk.extend(row(a, true));
        if !last {
            walk.extend(row(b, false));
            walk.extend(row(a, true));
        }
        walk.push(v(b, n));
        walk.extend(row(c, false));
        walk.extend(row(d, true));
        walk.extend(row(e, false));
        if last {
            walk.extend(row(d, true));
            walk.push(v(c, n));
            walk.push(v(c, n - 1));
            walk.extend((1..n).rev().map(|j| v(b, j)));
        }
    }
    walk
}

/// Builds the square trap and checks greedy against the witness walk.
///
/// For a single block greedy must cross `(n - 1)^2 + 2` heavy edges and
/// the witness `3n - 5`; for stacked blocks the ratio greedy / witness must
/// reach `n / 8`.
pub fn gen_greedy_trap_square(n: u32, k: u64) -> Result<VerifiedTrap, AdversaryError> {
    let t = verify(trap_square(n, k)?, trap_square_witness(n), k)?;
    if n == SQUARE_BLOCK_ROWS {
        let greedy = ((n - 1) * (n - 1) + 2) as usize;
        let witness = (3 * n - 5) as usize;
        if t.greedy_heavy != greedy || t.witness_heavy != witness {
            return Err(AdversaryError::ReconstructionFailed(format!(
                "heavy counts greedy {} / witness {}, expected {greedy} / {witness}",
                t.greedy_heavy, t.witness_heavy
            )));
        }
    } else if t.ratio_lower_bound() < Ratio::new(u64::from(n), 8) {
        return Err(AdversaryError::ReconstructionFailed(format!(
            "greedy / witness = {} is below n / 8",
            t.ratio_lower_bound()
        )));
    }
    Ok(t)
}
