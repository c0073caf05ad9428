use std::collections::{BTreeMap, BTreeSet};

use super::{Family, HardwareGraph, TopologyError};

/// Result of reading an edge list: the graph plus the number of repeated
/// edges that were dropped.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: HardwareGraph,
    pub duplicate_edges: usize,
}

/// Reads a whitespace-separated edge list.
///
/// Each line holds either `a b` (an edge) or a single id (an isolated
/// node). Blank lines and lines starting with `#` are skipped. Ids are
/// sorted and renumbered to `0..N`; the file ids become node labels.
pub fn load_graph(source: &str) -> Result<LoadedGraph, TopologyError> {
    let mut declared = BTreeSet::new();
    let mut raw_edges = Vec::new();
    for (lineno, line) in source.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<u64> =
            trimmed.split_whitespace().map(|f| f.parse::<u64>()).collect::<Result<_, _>>().map_err(|e| {
                TopologyError::Parse { line: line_no, reason: format!("expected non-negative integers: {e}") }
            })?;
        match fields.as_slice() {
            [a] => {
                declared.insert(*a);
            }
            [a, b] if a == b => {
                return Err(TopologyError::Parse { line: line_no, reason: format!("self-loop on node {a}") })
            }
            [a, b] => {
                declared.insert(*a);
                declared.insert(*b);
                raw_edges.push((*a, *b));
            }
            _ => {
                return Err(TopologyError::Parse {
                    line: line_no,
                    reason: format!("expected 1 or 2 fields, found {}", fields.len()),
                })
            }
        }
    }
    let labels: Vec<u64> = declared.into_iter().collect();
    let index: BTreeMap<u64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let edges = raw_edges.into_iter().map(|(a, b)| (index[&a], index[&b]));
    let (graph, duplicate_edges) = HardwareGraph::new(Family::Custom, BTreeMap::new(), labels, edges)?;
    if duplicate_edges > 0 {
        log::warn!("edge list contained {duplicate_edges} duplicate edge(s); ignored");
    }
    Ok(LoadedGraph { graph, duplicate_edges })
}
