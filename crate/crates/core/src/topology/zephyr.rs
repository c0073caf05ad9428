use super::{params_of, Family, HardwareGraph, TopologyError};

/// Zephyr coordinate `(u, w, k, j, z)`: orientation, perpendicular offset
/// (`0..2m+1`), qubit index within the shore, half-tile shift and parallel
/// offset (`0..m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZephyrCoord {
    pub u: usize,
    pub w: usize,
    pub k: usize,
    pub j: usize,
    pub z: usize,
}

/// Coordinates of every node, indexed by node id.
pub fn zephyr_coordinates(m: usize, t: usize) -> Vec<ZephyrCoord> {
    let big_m = 2 * m + 1;
    let mut out = Vec::with_capacity(4 * t * m * big_m);
    for u in 0..2 {
        for w in 0..big_m {
            for k in 0..t {
                for j in 0..2 {
                    for z in 0..m {
                        out.push(ZephyrCoord { u, w, k, j, z });
                    }
                }
            }
        }
    }
    out
}

/// Zephyr lattice `Z_{m,t}`.
///
/// Qubits carry `4t` internal couplers, two external and two odd couplers;
/// with `t = 4` interior qubits have degree 20.
pub fn build_zephyr(m: usize, t: usize) -> Result<HardwareGraph, TopologyError> {
    if m == 0 || t == 0 {
        return Err(TopologyError::InvalidParameters {
            family: Family::Zephyr,
            reason: format!("m and t must be >= 1 (got {m}, {t})"),
        });
    }
    let big_m = 2 * m + 1;
    let num_nodes = m
        .checked_mul(big_m)
        .and_then(|c| c.checked_mul(4 * t))
        .filter(|&c| c <= u32::MAX as usize)
        .ok_or(TopologyError::TooLarge { family: Family::Zephyr })?;
    let id = |u: usize, w: usize, k: usize, j: usize, z: usize| (((u * big_m + w) * t + k) * 2 + j) * m + z;

    let mut edges = Vec::new();
    for u in 0..2 {
        for w in 0..big_m {
            for k in 0..t {
                // external
                for j in 0..2 {
                    for z in 0..m - 1 {
                        edges.push((id(u, w, k, j, z), id(u, w, k, j, z + 1)));
                    }
                }
                // odd
                for a in 0..2 {
                    for z in a..m {
                        edges.push((id(u, w, k, 0, z), id(u, w, k, 1, z - a)));
                    }
                }
            }
        }
    }
    // internal: vertical (0, 2w+1+a(2i-1), k, j, z) meets horizontal (1, 2z+1+b(2j-1), h, i, w)
    for w in 0..m {
        for z in 0..m {
            for i in 0..2 {
                for j in 0..2 {
                    for a in 0..2 {
                        for b in 0..2 {
                            let wv = 2 * w + 1 + a * (2 * i) - a;
                            let wh = 2 * z + 1 + b * (2 * j) - b;
                            for h in 0..t {
                                for k in 0..t {
                                    edges.push((id(0, wv, k, j, z), id(1, wh, h, i, w)));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let params = params_of(&[("m", m as u64), ("t", t as u64)]);
    let (graph, dups) = HardwareGraph::new(Family::Zephyr, params, (0..num_nodes as u64).collect(), edges)?;
    debug_assert_eq!(dups, 0);
    Ok(graph)
}
