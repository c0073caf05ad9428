//! Qubit-connectivity graphs.
//!
//! Generated families follow the vendor coordinate schemes. Every graph is
//! stored with contiguous node ids `0..N` and a sorted list of unordered
//! edges `(i, j)` with `i < j`. The original label of each node (vendor
//! linear index, or the id found in an edge-list file) is kept alongside.

mod chimera;
mod edgelist;
mod pegasus;
mod zephyr;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chimera::{build_chimera, chimera_coordinates, ChimeraCoord};
pub use edgelist::{load_graph, LoadedGraph};
pub use pegasus::{
    build_pegasus, pegasus_coordinates, PegasusCoord, PEGASUS_HORIZONTAL_OFFSETS, PEGASUS_VERTICAL_OFFSETS,
};
pub use zephyr::{build_zephyr, zephyr_coordinates, ZephyrCoord};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("invalid {family} parameters: {reason}")]
    InvalidParameters { family: Family, reason: String },
    #[error("{family} graph with these parameters is too large to index")]
    TooLarge { family: Family },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("bad topology spec: {0}")]
    Spec(String),
    #[error("edge ({0}, {1}) references a node outside the graph")]
    DanglingEdge(usize, usize),
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Chimera,
    Pegasus,
    Zephyr,
    Custom,
}

impl Family {
    /// Largest degree a qubit can have in the ideal lattice with 4-qubit
    /// shores (`None` for custom graphs).
    pub fn nominal_max_degree(self) -> Option<usize> {
        match self {
            Family::Chimera => Some(6),
            Family::Pegasus => Some(15),
            Family::Zephyr => Some(20),
            Family::Custom => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Chimera => "chimera",
            Family::Pegasus => "pegasus",
            Family::Zephyr => "zephyr",
            Family::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Undirected hardware graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardwareGraph {
    family: Family,
    params: BTreeMap<String, u64>,
    labels: Vec<u64>,
    edges: Vec<(usize, usize)>,
}

impl HardwareGraph {
    /// Builds a graph from contiguous ids. Edges are normalized to `i < j`,
    /// sorted and deduplicated; the number of dropped duplicates is returned.
    pub fn new(
        family: Family,
        params: BTreeMap<String, u64>,
        labels: Vec<u64>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<(Self, usize), TopologyError> {
        let n = labels.len();
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(TopologyError::SelfLoop(a));
            }
            if a >= n || b >= n {
                return Err(TopologyError::DanglingEdge(a, b));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        let before = normalized.len();
        normalized.dedup();
        let duplicates = before - normalized.len();
        Ok((HardwareGraph { family, params, labels, edges: normalized }, duplicates))
    }

    /// Graph over `n` nodes with the given edges and identity labels.
    pub fn custom(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, TopologyError> {
        Self::new(Family::Custom, BTreeMap::new(), (0..n as u64).collect(), edges).map(|(g, _)| g)
    }

    /// Complete graph on `n` nodes.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Self::custom(n, edges).expect("complete graph edges are valid")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &BTreeMap<String, u64> {
        &self.params
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    /// Original label of each node, indexed by node id.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Sorted unordered edges with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_nodes()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Symmetric adjacency lists, neighbors in ascending order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

pub(crate) fn params_of(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Parses a short topology description such as `chimera:16,16,4`,
/// `pegasus:16` or `zephyr:6,4`.
pub fn build_from_spec(spec: &str) -> Result<HardwareGraph, TopologyError> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let nums: Vec<usize> = args
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| TopologyError::Spec(format!("parameters `{args}`: {e}")))?;
    let bad = |family: Family, reason: &str| TopologyError::InvalidParameters { family, reason: reason.to_string() };
    match name.trim() {
        "chimera" => match nums.as_slice() {
            [m] => build_chimera(*m, *m, 4),
            [m, n] => build_chimera(*m, *n, 4),
            [m, n, t] => build_chimera(*m, *n, *t),
            _ => Err(bad(Family::Chimera, "expected chimera:M[,N[,T]]")),
        },
        "pegasus" => match nums.as_slice() {
            [m] => build_pegasus(*m),
            _ => Err(bad(Family::Pegasus, "expected pegasus:M")),
        },
        "zephyr" => match nums.as_slice() {
            [m] => build_zephyr(*m, 4),
            [m, t] => build_zephyr(*m, *t),
            _ => Err(bad(Family::Zephyr, "expected zephyr:M[,T]")),
        },
        "complete" => match nums.as_slice() {
            [n] => Ok(HardwareGraph::complete(*n)),
            _ => Err(bad(Family::Custom, "expected complete:N")),
        },
        other => Err(TopologyError::Spec(format!("unknown topology `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_normalizes_and_counts_duplicates() {
        let (g, dups) =
            HardwareGraph::new(Family::Custom, BTreeMap::new(), vec![0, 1, 2], [(1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(dups, 1);
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn rejects_self_loops_and_dangling_edges() {
        assert_eq!(HardwareGraph::custom(2, [(1, 1)]), Err(TopologyError::SelfLoop(1)));
        assert_eq!(HardwareGraph::custom(2, [(0, 2)]), Err(TopologyError::DanglingEdge(0, 2)));
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = build_chimera(2, 2, 4).unwrap();
        let adj = g.adjacency();
        for (a, list) in adj.iter().enumerate() {
            for &b in list {
                assert!(adj[b].contains(&a));
            }
        }
    }

    #[test]
    fn spec_strings() {
        assert_eq!(build_from_spec("chimera:1,1,4").unwrap().num_nodes(), 8);
        assert_eq!(build_from_spec("pegasus:2").unwrap().num_nodes(), 40);
        assert_eq!(build_from_spec("zephyr:1").unwrap().num_nodes(), 48);
        assert_eq!(build_from_spec("complete:5").unwrap().num_edges(), 10);
        assert!(build_from_spec("hexagon:3").is_err());
        assert!(build_from_spec("pegasus:1").is_err());
    }
}
