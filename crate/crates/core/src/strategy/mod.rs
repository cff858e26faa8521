//! The strategy contract, the built-in agents and a name registry.

mod greedy;
mod paths;
mod sweep;

use thiserror::Error;

use crate::engine::Knowledge;
use crate::grid::Vertex;

pub use greedy::Greedy;
pub use paths::{cheapest_to, known_distances, known_shortest_path, route_to, EdgeFilter, KnownPath};
pub use sweep::{
    detect_k_separator, sweep_back_leg, sweep_back_plan, KSeparator, LadderSweep, SweepPhase,
    SweepState,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("no unvisited vertex is reachable over revealed edges")]
    Stuck,
    #[error("every vertex is already visited")]
    NothingLeft,
}

/// An online agent. Given the same knowledge history it must make the same moves.
pub trait Strategy {
    fn name(&self) -> &str;

    /// Next vertex to move to; must be a legal move from the current position.
    fn decide(&mut self, knowledge: &Knowledge) -> Result<Vertex, StrategyError>;
}

impl<T: Strategy + ?Sized> Strategy for Box<T> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn decide(&mut self, knowledge: &Knowledge) -> Result<Vertex, StrategyError> {
        (**self).decide(knowledge)
    }
}

pub type StrategyFactory = fn() -> Box<dyn Strategy + Send>;

/// Maps strategy names to constructors.
#[derive(Clone)]
pub struct StrategyRegistry {
    entries: Vec<(String, StrategyFactory)>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry { entries: Vec::new() }
    }

    /// `greedy` and `sweep`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register("greedy", || Box::new(Greedy::new()));
        r.register("sweep", || Box::new(LadderSweep::new()));
        r
    }

    /// Adds or replaces a strategy.
    pub fn register(&mut self, name: &str, factory: StrategyFactory) {
        match self.entries.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = factory,
            None => self.entries.push((name.to_string(), factory)),
        }
    }

    pub fn create(&self, name: &str) -> Option<Box<dyn Strategy + Send>> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, f)| f())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

/// Builds a built-in strategy by name.
pub fn by_name(name: &str) -> Option<Box<dyn Strategy + Send>> {
    StrategyRegistry::with_builtins().create(name)
}
