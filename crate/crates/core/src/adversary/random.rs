use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{GridSpec, Instance, Orientation, Vertex};

use super::AdversaryError;

/// Redraws allowed before a directed draw gives up.
pub const MAX_ORIENTATION_RETRIES: usize = 1000;

/// Independent `{1, k}` weights with `P(k) = p_heavy`; directed grids draw
/// orientations uniformly and redraw until every vertex is reachable.
pub fn gen_random(
    spec: GridSpec,
    k: u64,
    p_heavy: f64,
    seed: u64,
) -> Result<Instance, AdversaryError> {
    if !(0.0..=1.0).contains(&p_heavy) {
        return Err(AdversaryError::BadProbability(p_heavy));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = (0..spec.edge_count())
        .map(|_| if rng.gen_bool(p_heavy) { k } else { 1 })
        .collect();
    let mut inst = Instance {
        spec,
        weights,
        orientation: None,
        start: Vertex::new(1, 1),
        k: Some(k),
    };
    if !spec.directed {
        return Ok(inst);
    }
    for _ in 0..MAX_ORIENTATION_RETRIES {
        inst.orientation = Some(
            (0..spec.edge_count())
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Orientation::Forward
                    } else {
                        Orientation::Backward
                    }
                })
                .collect(),
        );
        if inst.reachable_from_start().iter().all(|r| *r) {
            return Ok(inst);
        }
    }
    Err(AdversaryError::RetriesExhausted)
}
