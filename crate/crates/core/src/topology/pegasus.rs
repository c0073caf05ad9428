use std::collections::HashMap;

use super::{params_of, Family, HardwareGraph, TopologyError};

/// Vertical qubit offsets of the standard Pegasus lattice.
pub const PEGASUS_VERTICAL_OFFSETS: [usize; 12] = [2, 2, 2, 2, 10, 10, 10, 10, 6, 6, 6, 6];
/// Horizontal qubit offsets of the standard Pegasus lattice.
pub const PEGASUS_HORIZONTAL_OFFSETS: [usize; 12] = [6, 6, 6, 6, 2, 2, 2, 2, 10, 10, 10, 10];

/// Pegasus coordinate `(u, w, k, z)`: orientation, perpendicular tile
/// offset, qubit offset within the tile and parallel tile offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PegasusCoord {
    pub u: usize,
    pub w: usize,
    pub k: usize,
    pub z: usize,
}

impl PegasusCoord {
    /// Vendor integer label of the coordinate.
    pub fn linear(self, m: usize) -> u64 {
        let m1 = m - 1;
        (self.u * 12 * m * m1 + self.w * 12 * m1 + self.k * m1 + self.z) as u64
    }
}

// Fabric window: the outer tiles keep only qubits whose offsets put them
// inside the lattice. Start/end cut per orientation.
fn fabric_bounds() -> ([usize; 2], [usize; 2]) {
    let min = |o: &[usize; 12]| *o.iter().min().unwrap();
    let max = |o: &[usize; 12]| *o.iter().max().unwrap();
    let start = [min(&PEGASUS_HORIZONTAL_OFFSETS), min(&PEGASUS_VERTICAL_OFFSETS)];
    let end = [12 - max(&PEGASUS_HORIZONTAL_OFFSETS), 12 - max(&PEGASUS_VERTICAL_OFFSETS)];
    (start, end)
}

fn in_fabric(c: PegasusCoord, m: usize, start: &[usize; 2], end: &[usize; 2]) -> bool {
    if c.w == 0 && c.k < start[c.u] {
        return false;
    }
    if c.w == m - 1 && c.k >= 12 - end[c.u] {
        return false;
    }
    true
}

/// Coordinates of the fabric qubits, indexed by node id (vendor label order).
pub fn pegasus_coordinates(m: usize) -> Vec<PegasusCoord> {
    if m < 2 {
        return Vec::new();
    }
    let (start, end) = fabric_bounds();
    let mut out = Vec::new();
    for u in 0..2 {
        for w in 0..m {
            for k in 0..12 {
                for z in 0..m - 1 {
                    let c = PegasusCoord { u, w, k, z };
                    if in_fabric(c, m, &start, &end) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

/// Pegasus lattice `P_m` (fabric qubits only).
///
/// Each qubit has up to 12 internal couplers, 2 external couplers and one
/// odd coupler, for a maximum degree of 15.
pub fn build_pegasus(m: usize) -> Result<HardwareGraph, TopologyError> {
    if m < 2 {
        return Err(TopologyError::InvalidParameters {
            family: Family::Pegasus,
            reason: format!("m must be >= 2 (got {m})"),
        });
    }
    if m.checked_mul(m).and_then(|c| c.checked_mul(24)).is_none_or(|c| c > u32::MAX as usize) {
        return Err(TopologyError::TooLarge { family: Family::Pegasus });
    }
    let m1 = m - 1;
    let (start, end) = fabric_bounds();
    let coords = pegasus_coordinates(m);
    let index: HashMap<PegasusCoord, usize> = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let id = |u, w, k, z| index.get(&PegasusCoord { u, w, k, z }).copied();

    let mut edges = Vec::new();
    let mut push = |a: Option<usize>, b: Option<usize>| {
        if let (Some(a), Some(b)) = (a, b) {
            edges.push((a, b));
        }
    };

    for u in 0..2 {
        for w in 0..m {
            let k_lo = if w == 0 { start[u] } else { 0 };
            let k_hi = 12 - if w == m1 { end[u] } else { 0 };
            for k in k_lo..k_hi {
                // external couplers along the qubit's own direction
                for z in 0..m1.saturating_sub(1) {
                    push(id(u, w, k, z), id(u, w, k, z + 1));
                }
            }
            for k in (k_lo..k_hi).step_by(2) {
                // odd couplers pair k with k+1
                for z in 0..m1 {
                    push(id(u, w, k, z), id(u, w, k + 1, z));
                }
            }
        }
    }

    let off0 = &PEGASUS_VERTICAL_OFFSETS;
    let off1 = &PEGASUS_HORIZONTAL_OFFSETS;
    for w in 0..m {
        for kk in 0..12 {
            let k_lo = if w > 0 { 0 } else { off1[kk] };
            let k_hi = if w < m1 { 12 } else { off1[kk] };
            for k in k_lo..k_hi {
                for z in 0..m1 {
                    let w2 = z + usize::from(kk < off0[k]);
                    let z2 = w - usize::from(k < off1[kk]);
                    // id() is None for non-fabric qubits, which drops the coupler
                    push(id(0, w, k, z), id(1, w2, kk, z2));
                }
            }
        }
    }

    let labels = coords.iter().map(|c| c.linear(m)).collect();
    let (graph, dups) = HardwareGraph::new(Family::Pegasus, params_of(&[("m", m as u64)]), labels, edges)?;
    debug_assert_eq!(dups, 0);
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_m() {
        assert!(build_pegasus(1).is_err());
        assert!(build_pegasus(0).is_err());
    }

    #[test]
    fn fabric_trims_eight_qubits_per_parallel_offset() {
        for m in 2..6 {
            assert_eq!(pegasus_coordinates(m).len(), 24 * m * (m - 1) - 8 * (m - 1));
        }
    }

    #[test]
    fn labels_are_strictly_increasing() {
        let g = build_pegasus(3).unwrap();
        assert!(g.labels().windows(2).all(|w| w[0] < w[1]));
    }
}
