//! Instance families and adversarial constructions.

mod adaptive;
mod family;
mod gadget;
mod hard_pair;
mod minimax;
mod random;
mod trap;

use thiserror::Error;

use crate::Ratio;

pub use adaptive::{
    adaptive_gadget_run, AdaptiveError, AdaptiveGadgetSource, AdaptiveRun, GadgetResponse,
};
pub use family::{InstanceFamily, MAX_FAMILY_MEMBERS};
pub use gadget::{
    gadget_block, gadget_ladder_from, gen_gadget_ladder, is_mirrored, GadgetChoice, GADGET_COLS,
};
pub use hard_pair::{find_hard_pair, find_hard_pair_g24, HARD_PAIR_RATIO};
pub use minimax::{
    minimax_value, MinimaxResult, WitnessNode, MAX_MINIMAX_MEMBERS, MAX_MINIMAX_VERTICES,
};
pub use random::{gen_random, MAX_ORIENTATION_RETRIES};
pub use trap::{
    gen_greedy_trap_ladder, gen_greedy_trap_square, trap_ladder, trap_ladder_opt,
    trap_ladder_witness, trap_square, trap_square_witness, VerifiedTrap, SQUARE_BLOCK_ROWS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversaryError {
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("no completable orientation found within the retry limit")]
    RetriesExhausted,
    #[error("family is too large to enumerate")]
    TooLarge,
    #[error("family has no members")]
    EmptyFamily,
    #[error("family members differ in shape or start")]
    MixedFamily,
    #[error("expected {expected} gadget choices, got {got}")]
    BadChoicesLength { expected: usize, got: usize },
    #[error("unsupported trap size {0}")]
    BadTrapSize(u32),
    #[error("trap reconstruction failed: {0}")]
    ReconstructionFailed(String),
    #[error("no pair of instances meets the hard-pair conditions")]
    NotFound,
    #[error("a family member has no covering walk")]
    InfeasibleMember,
    #[error("no strategy completes every member within the step cap")]
    Unwinnable,
    #[error("step cap {cap} is not slack: value {value} changed to {raised} when doubled")]
    CapNotSlack { cap: usize, value: Ratio, raised: Ratio },
}
