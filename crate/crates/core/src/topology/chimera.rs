use super::{params_of, Family, HardwareGraph, TopologyError};

/// Chimera coordinate `(i, j, u, k)`: cell row, cell column, orientation
/// (0 = vertical, 1 = horizontal) and index within the shore.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChimeraCoord {
    pub row: usize,
    pub col: usize,
    pub u: usize,
    pub k: usize,
}

/// Coordinates of every node, indexed by node id.
pub fn chimera_coordinates(m: usize, n: usize, t: usize) -> Vec<ChimeraCoord> {
    let mut out = Vec::with_capacity(2 * m * n * t);
    for row in 0..m {
        for col in 0..n {
            for u in 0..2 {
                for k in 0..t {
                    out.push(ChimeraCoord { row, col, u, k });
                }
            }
        }
    }
    out
}

/// Chimera lattice of `m x n` unit cells, each a `K_{t,t}`.
///
/// Vertical qubits couple to the same qubit in the cell below, horizontal
/// qubits to the same qubit in the cell to the right.
pub fn build_chimera(m: usize, n: usize, t: usize) -> Result<HardwareGraph, TopologyError> {
    if m == 0 || n == 0 || t == 0 {
        return Err(TopologyError::InvalidParameters {
            family: Family::Chimera,
            reason: format!("m, n, t must be >= 1 (got {m}, {n}, {t})"),
        });
    }
    let num_nodes = m
        .checked_mul(n)
        .and_then(|c| c.checked_mul(2))
        .and_then(|c| c.checked_mul(t))
        .filter(|&c| c <= u32::MAX as usize)
        .ok_or(TopologyError::TooLarge { family: Family::Chimera })?;

    let id = |i: usize, j: usize, u: usize, k: usize| ((i * n + j) * 2 + u) * t + k;
    let mut edges = Vec::with_capacity(m * n * t * t + 2 * m * n * t);
    for i in 0..m {
        for j in 0..n {
            for k0 in 0..t {
                for k1 in 0..t {
                    edges.push((id(i, j, 0, k0), id(i, j, 1, k1)));
                }
            }
            for k in 0..t {
                if i + 1 < m {
                    edges.push((id(i, j, 0, k), id(i + 1, j, 0, k)));
                }
                if j + 1 < n {
                    edges.push((id(i, j, 1, k), id(i, j + 1, 1, k)));
                }
            }
        }
    }
    let params = params_of(&[("m", m as u64), ("n", n as u64), ("t", t as u64)]);
    let (graph, dups) = HardwareGraph::new(Family::Chimera, params, (0..num_nodes as u64).collect(), edges)?;
    debug_assert_eq!(dups, 0);
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell_is_k44() {
        let g = build_chimera(1, 1, 4).unwrap();
        assert_eq!(g.num_nodes(), 8);
        assert_eq!(g.num_edges(), 16);
        assert!(g.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn zero_parameters_rejected() {
        assert!(matches!(build_chimera(0, 1, 4), Err(TopologyError::InvalidParameters { .. })));
        assert!(build_chimera(1, 1, 0).is_err());
    }

    #[test]
    fn overflow_is_a_size_error() {
        assert_eq!(build_chimera(usize::MAX / 2, 3, 4), Err(TopologyError::TooLarge { family: Family::Chimera }));
    }

    #[test]
    fn coordinates_follow_linear_index() {
        let coords = chimera_coordinates(2, 3, 4);
        assert_eq!(coords.len(), 48);
        let c = coords[((1 * 3 + 2) * 2 + 1) * 4 + 3];
        assert_eq!(c, ChimeraCoord { row: 1, col: 2, u: 1, k: 3 });
    }
}
