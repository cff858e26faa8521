use crate::grid::{GridSpec, Instance, Orientation, Vertex};

use super::AdversaryError;

/// Largest family enumerated explicitly.
pub const MAX_FAMILY_MEMBERS: usize = 1 << 20;

/// All `{1, k}` assignments (and orientations, on directed grids) of one grid
/// from a fixed start, optionally filtered.
///
/// Member `i` is the `i`-th assignment in lexicographic order of the weight
/// sequence over canonical edges, `1 < k`; on directed grids the orientation
/// sequence (`Forward < Backward`) is the faster-varying part.
#[derive(Clone, Debug)]
pub struct InstanceFamily {
    pub spec: GridSpec,
    pub start: Vertex,
    pub k: u64,
    pub members: Vec<Instance>,
}

impl InstanceFamily {
    /// Every assignment, keeping only those from which every vertex is reachable.
    pub fn all(spec: GridSpec, start: Vertex, k: u64) -> Result<Self, AdversaryError> {
        Self::filtered(spec, start, k, |_| true)
    }

    pub fn filtered(
        spec: GridSpec,
        start: Vertex,
        k: u64,
        keep: impl Fn(&Instance) -> bool,
    ) -> Result<Self, AdversaryError> {
        let e = spec.edge_count();
        let bits = if spec.directed { 2 * e } else { e };
        if bits >= 64 || (1u64 << bits) > MAX_FAMILY_MEMBERS as u64 {
            return Err(AdversaryError::TooLarge);
        }
        let mut members = Vec::new();
        for weights in 0..(1u64 << e) {
            let ws: Vec<u64> = (0..e)
                .map(|i| if weights >> (e - 1 - i) & 1 == 1 { k } else { 1 })
                .collect();
            let orientations = if spec.directed { 1u64 << e } else { 1 };
            for o in 0..orientations {
                let inst = Instance {
                    spec,
                    weights: ws.clone(),
                    orientation: spec.directed.then(|| {
                        (0..e)
                            .map(|i| {
                                if o >> (e - 1 - i) & 1 == 1 {
                                    Orientation::Backward
                                } else {
                                    Orientation::Forward
                                }
                            })
                            .collect()
                    }),
                    start,
                    k: Some(k),
                };
                if inst.reachable_from_start().iter().all(|r| *r) && keep(&inst) {
                    members.push(inst);
                }
            }
        }
        if members.is_empty() {
            return Err(AdversaryError::EmptyFamily);
        }
        Ok(InstanceFamily {
            spec,
            start,
            k,
            members,
        })
    }

    pub fn from_members(members: Vec<Instance>) -> Result<Self, AdversaryError> {
        let first = members.first().ok_or(AdversaryError::EmptyFamily)?;
        let (spec, start) = (first.spec, first.start);
        if members.iter().any(|m| m.spec != spec || m.start != start) {
            return Err(AdversaryError::MixedFamily);
        }
        let k = members
            .iter()
            .flat_map(|m| m.weights.iter().copied())
            .max()
            .unwrap_or(1);
        Ok(InstanceFamily {
            spec,
            start,
            k,
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
