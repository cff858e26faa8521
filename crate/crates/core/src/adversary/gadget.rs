use crate::grid::{GridSpec, Instance, Vertex};

use super::{find_hard_pair_g24, AdversaryError};

/// Columns per gadget.
pub const GADGET_COLS: u32 = 4;

/// Which member of the hard pair a gadget copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetChoice {
    First,
    Second,
}

impl GadgetChoice {
    /// `First, Second, First, ...`
    pub fn alternating(m: usize) -> Vec<GadgetChoice> {
        (0..m)
            .map(|g| if g % 2 == 0 { GadgetChoice::First } else { GadgetChoice::Second })
            .collect()
    }
}

/// Whether gadget `g` (0-based) is stored upside down.
pub fn is_mirrored(g: usize) -> bool {
    g % 2 == 1
}

/// The `2 x 4` block of gadget `g`, already mirrored if needed.
pub fn gadget_block(pair: &(Instance, Instance), g: usize, choice: GadgetChoice) -> Instance {
    let base = match choice {
        GadgetChoice::First => &pair.0,
        GadgetChoice::Second => &pair.1,
    };
    if is_mirrored(g) {
        base.mirrored_rows()
    } else {
        base.clone()
    }
}

/// Chains `choices.len()` gadgets left to right. Between an upright gadget
/// and the mirrored one after it the top connector is heavy and the bottom
/// one light; after a mirrored gadget it is the other way round.
pub fn gadget_ladder_from(
    pair: &(Instance, Instance),
    k: u64,
    choices: &[GadgetChoice],
) -> Result<Instance, AdversaryError> {
    let m = choices.len();
    if m == 0 {
        return Err(AdversaryError::BadChoicesLength { expected: 1, got: 0 });
    }
    let spec = GridSpec::ladder(GADGET_COLS * m as u32);
    let mut inst = Instance::all_ones(spec).with_k(k);
    for (g, choice) in choices.iter().enumerate() {
        let block = gadget_block(pair, g, *choice);
        let off = GADGET_COLS * g as u32;
        for e in 0..block.spec.edge_count() {
            let id = block.spec.edge(e);
            let shift = |v: Vertex| Vertex::new(v.row, v.col + off);
            inst.set_weight(shift(id.first()), shift(id.second()), block.weights[e]);
        }
        if g + 1 < m {
            let c = off + GADGET_COLS;
            let (top, bottom) = if is_mirrored(g) { (1, k) } else { (k, 1) };
            inst.set_weight(Vertex::new(1, c), Vertex::new(1, c + 1), top);
            inst.set_weight(Vertex::new(2, c), Vertex::new(2, c + 1), bottom);
        }
    }
    Ok(inst)
}

/// Gadget ladder of `m` hard gadgets built from the recovered hard pair.
pub fn gen_gadget_ladder(
    m: usize,
    k: u64,
    choices: Option<&[GadgetChoice]>,
) -> Result<Instance, AdversaryError> {
    if let Some(c) = choices {
        if c.len() != m {
            return Err(AdversaryError::BadChoicesLength {
                expected: m,
                got: c.len(),
            });
        }
    }
    let pair = find_hard_pair_g24(k)?;
    let choices = choices.map_or_else(|| GadgetChoice::alternating(m), <[_]>::to_vec);
    gadget_ladder_from(&pair, k, &choices)
}
