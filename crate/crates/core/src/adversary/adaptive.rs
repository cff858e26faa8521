//! Gadget-by-gadget adversary that decides each gadget only once the agent
//! has committed to a direction inside it.

use crate::engine::{
    default_step_budget, reveal_from_instance, run, EdgeInfo, EngineError, RevelationSource,
    SourceError, Trace,
};
use crate::grid::{GridSpec, Instance, Vertex};
use crate::opt::{ladder_profile_opt, CoverSearch, OptOptions};
use crate::strategy::Strategy;
use crate::Ratio;

use super::{find_hard_pair_g24, gadget_block, gadget_ladder_from, is_mirrored, AdversaryError, GadgetChoice, GADGET_COLS};

/// Member each first move inside a gadget is answered with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetResponse {
    /// The agent first leaves the entry vertex across the rung.
    pub across: GadgetChoice,
    /// The agent first leaves the entry vertex along its row.
    pub along: GadgetChoice,
}

impl GadgetResponse {
    /// For each first move, the member whose cheapest completion after that
    /// move is the largest multiple of its optimum. Ties go to the first member.
    pub fn for_pair(pair: &(Instance, Instance)) -> Result<Self, AdversaryError> {
        let s = pair.0.start;
        let across = Vertex::new(3 - s.row, s.col);
        let along = Vertex::new(s.row, s.col + 1);
        let pick = |to: Vertex| -> Result<GadgetChoice, AdversaryError> {
            let mut best: Option<(Ratio, GadgetChoice)> = None;
            for (inst, choice) in [(&pair.0, GadgetChoice::First), (&pair.1, GadgetChoice::Second)] {
                let mut search = CoverSearch::new(inst, OptOptions::default())
                    .map_err(|_| AdversaryError::InfeasibleMember)?;
                let opt = search.solve().map_err(|_| AdversaryError::InfeasibleMember)?.cost;
                let mut visited = vec![false; inst.spec.vertex_count()];
                visited[inst.spec.index(s)] = true;
                let first = inst.traversal(s, to).ok_or(AdversaryError::InfeasibleMember)?;
                let rest = search.completion(to, &visited).ok_or(AdversaryError::InfeasibleMember)?;
                let r = Ratio::new(first + rest, opt.max(1));
                if best.is_none_or(|(b, _)| r > b) {
                    best = Some((r, choice));
                }
            }
            Ok(best.expect("two members").1)
        };
        Ok(GadgetResponse {
            across: pick(across)?,
            along: pick(along)?,
        })
    }
}

/// Serves a gadget ladder whose gadgets stay undecided until the agent
/// first visits a vertex of the gadget other than its entry.
#[derive(Clone, Debug)]
pub struct AdaptiveGadgetSource {
    pair: (Instance, Instance),
    k: u64,
    response: GadgetResponse,
    committed: Vec<Option<GadgetChoice>>,
    /// First non-entry vertex visited in each gadget.
    first_visits: Vec<Option<Vertex>>,
}

impl AdaptiveGadgetSource {
    pub fn new(pair: (Instance, Instance), m: usize, k: u64) -> Result<Self, AdversaryError> {
        if m == 0 {
            return Err(AdversaryError::BadChoicesLength { expected: 1, got: 0 });
        }
        let response = GadgetResponse::for_pair(&pair)?;
        Ok(AdaptiveGadgetSource {
            pair,
            k,
            response,
            committed: vec![None; m],
            first_visits: vec![None; m],
        })
    }

    /// Entry vertex of gadget `g`.
    pub fn entry(&self, g: usize) -> Vertex {
        let s = gadget_block(&self.pair, g, GadgetChoice::First).start;
        Vertex::new(s.row, s.col + GADGET_COLS * g as u32)
    }

    pub fn committed(&self) -> &[Option<GadgetChoice>] {
        &self.committed
    }

    pub fn first_visits(&self) -> &[Option<Vertex>] {
        &self.first_visits
    }

    pub fn response(&self) -> GadgetResponse {
        self.response
    }

    fn current(&self) -> Instance {
        let choices: Vec<GadgetChoice> = self
            .committed
            .iter()
            .map(|c| c.unwrap_or(GadgetChoice::First))
            .collect();
        gadget_ladder_from(&self.pair, self.k, &choices).expect("nonempty ladder")
    }

    fn decide(&mut self, v: Vertex) {
        let g = ((v.col - 1) / GADGET_COLS) as usize;
        if self.committed[g].is_some() || v == self.entry(g) {
            return;
        }
        let e = self.entry(g);
        let choice = if v == Vertex::new(3 - e.row, e.col) {
            self.response.across
        } else if v == Vertex::new(e.row, e.col + 1) {
            self.response.along
        } else {
            // Entered from the far side: the pair's analysis does not apply.
            GadgetChoice::First
        };
        debug_assert!(is_mirrored(g) == (e.row == 2));
        self.first_visits[g] = Some(v);
        self.committed[g] = Some(choice);
    }
}

impl RevelationSource for AdaptiveGadgetSource {
    fn spec(&self) -> GridSpec {
        GridSpec::ladder(GADGET_COLS * self.committed.len() as u32)
    }

    fn incident_info(&mut self, v: Vertex) -> Result<Vec<EdgeInfo>, SourceError> {
        if !self.spec().contains(v) {
            return Err(SourceError::Inconsistent(format!("{v} is off the grid")));
        }
        self.decide(v);
        Ok(reveal_from_instance(&self.current(), v))
    }

    fn commit(&mut self) -> Instance {
        self.current()
    }
}

/// Outcome of a run against the adaptive gadget adversary.
#[derive(Clone, Debug)]
pub struct AdaptiveRun {
    pub trace: Trace,
    pub instance: Instance,
    pub choices: Vec<Option<GadgetChoice>>,
    pub opt: u64,
    pub ratio: Option<Ratio>,
}

/// Runs `strategy` on an `m`-gadget ladder decided adaptively.
pub fn adaptive_gadget_run<T: Strategy + ?Sized>(
    strategy: &mut T,
    m: usize,
    k: u64,
    step_budget: Option<u64>,
) -> Result<AdaptiveRun, AdaptiveError> {
    let pair = find_hard_pair_g24(k)?;
    let source = AdaptiveGadgetSource::new(pair, m, k)?;
    let start = source.entry(0);
    let budget = step_budget.unwrap_or_else(|| default_step_budget(&source.spec(), k));
    let mut choices = Vec::new();
    let out = {
        let mut src = source;
        let out = run(&mut src, start, strategy, budget)?;
        choices.extend_from_slice(src.committed());
        out
    };
    let opt = ladder_profile_opt(&out.instance).map_err(|_| AdversaryError::InfeasibleMember)?;
    let ratio = out
        .trace
        .complete
        .then(|| Ratio::new(out.trace.total_cost, opt.max(1)));
    Ok(AdaptiveRun {
        trace: out.trace,
        instance: out.instance,
        choices,
        opt,
        ratio,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum AdaptiveError {
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
