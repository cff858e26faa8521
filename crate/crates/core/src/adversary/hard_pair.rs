use crate::grid::{GridSpec, Instance, Vertex};
use crate::opt::optimal_cost;
use crate::Ratio;

use super::{minimax_value, AdversaryError, InstanceFamily};

/// Pair-restricted game value a hard pair must reach.
pub const HARD_PAIR_RATIO: (u64, u64) = (5, 4);

/// Lexicographically first pair of `2 x 4` members, both with light edges
/// at the start and optimum `target_opt`, whose two-member game value is at
/// least 5/4.
pub fn find_hard_pair(k: u64, target_opt: u64) -> Result<(Instance, Instance), AdversaryError> {
    let start = Vertex::new(1, 1);
    let spec = GridSpec::ladder(4);
    let light_start = |m: &Instance| {
        spec.incident(start).all(|(e, _)| m.weights[e] == 1)
    };
    let family = InstanceFamily::filtered(spec, start, k, |m| {
        light_start(m) && optimal_cost(m).is_ok_and(|r| r.cost == target_opt)
    })
    .map_err(|_| AdversaryError::NotFound)?;
    let bound = Ratio::new(HARD_PAIR_RATIO.0, HARD_PAIR_RATIO.1);
    let members = &family.members;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let pair = InstanceFamily::from_members(vec![members[i].clone(), members[j].clone()])?;
            if minimax_value(&pair, 8)?.value >= bound {
                return Ok((members[i].clone(), members[j].clone()));
            }
        }
    }
    Err(AdversaryError::NotFound)
}

/// The hard pair with optimum 8.
pub fn find_hard_pair_g24(k: u64) -> Result<(Instance, Instance), AdversaryError> {
    find_hard_pair(k, 8)
}
