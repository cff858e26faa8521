use crate::engine::Knowledge;
use crate::grid::Vertex;

use super::paths::{cheapest_to, EdgeFilter};
use super::{Strategy, StrategyError};

/// Moves along a cheapest revealed path to the nearest unvisited vertex,
/// replanning after every move.
#[derive(Clone, Debug, Default)]
pub struct Greedy;

impl Greedy {
    pub fn new() -> Self {
        Greedy
    }
}

impl Strategy for Greedy {
    fn name(&self) -> &str {
        "greedy"
    }

    fn decide(&mut self, k: &Knowledge) -> Result<Vertex, StrategyError> {
        if k.all_visited() {
            return Err(StrategyError::NothingLeft);
        }
        let path = cheapest_to(
            k,
            k.position(),
            EdgeFilter::Any,
            |v| !k.is_visited(v),
            Vertex::col_major_key,
        )
        .ok_or(StrategyError::Stuck)?;
        Ok(path.moves[0])
    }
}
