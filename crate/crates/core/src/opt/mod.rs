//! Exact offline optima: the cheapest walk from the start visiting every vertex.

mod profile;
mod search;

use thiserror::Error;

use crate::grid::Vertex;

pub use profile::ladder_profile_opt;
pub use search::{optimal_cost, optimal_cost_with, CoverSearch, OptOptions, MAX_SEARCH_VERTICES};

/// Optimal covering walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptResult {
    pub cost: u64,
    /// Vertex walk from the start; lexicographically smallest among optima
    /// under the neighbor order Down, Right, Up, Left.
    pub witness: Vec<Vertex>,
}

/// Exact optimum by whichever oracle applies: the profile program for
/// undirected ladders, the exhaustive search otherwise.
pub fn best_known_opt(inst: &crate::grid::Instance) -> Result<u64, OptError> {
    best_known_opt_with(inst, None)
}

/// As [`best_known_opt`], with the search's vertex limit raised to `vertex_limit`.
pub fn best_known_opt_with(
    inst: &crate::grid::Instance,
    vertex_limit: Option<usize>,
) -> Result<u64, OptError> {
    if inst.spec.is_ladder() && !inst.spec.directed {
        ladder_profile_opt(inst)
    } else {
        let opts = OptOptions {
            end: None,
            vertex_limit,
        };
        optimal_cost_with(inst, opts).map(|r| r.cost)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OptError {
    #[error("grid has {vertices} vertices; exhaustive search supports at most {max}")]
    TooLarge { vertices: usize, max: usize },
    #[error("no walk from the start covers every vertex")]
    Infeasible,
    #[error("the profile program only handles undirected 2-row grids")]
    NotALadder,
    #[error("required endpoint {0} lies outside the grid")]
    BadEndpoint(Vertex),
}
