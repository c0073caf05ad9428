//! JSON documents for instances (`ising-v1`) and sample sets
//! (`samples-v1`).
//!
//! Floats are written in shortest round-trip form, so reading a document
//! back yields bit-identical coefficients and energies.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::model::{Interval, IsingModel, ModelError, SampleRecord, SampleSet};
use crate::topology::{Family, HardwareGraph, TopologyError};

pub const INSTANCE_FORMAT: &str = "ising-v1";
pub const SAMPLES_FORMAT: &str = "samples-v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format {found:?}, expected {expected:?}")]
    Format { expected: &'static str, found: String },
    #[error("graph nodes must be 0..{0} in order")]
    NodeIds(usize),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDoc {
    family: Family,
    params: BTreeMap<String, u64>,
    nodes: Vec<usize>,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<u64>>,
}

// Node biases keyed by decimal node id, written in node order.
#[derive(Debug)]
struct Biases(Vec<(usize, f64)>);

impl Serialize for Biases {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (i, v) in &self.0 {
            map.serialize_entry(&i.to_string(), v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Biases {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Biases;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from node id to bias")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> Result<Biases, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, f64>()? {
                    let id = k.parse().map_err(|_| serde::de::Error::custom(format!("bad node id {k:?}")))?;
                    out.push((id, v));
                }
                Ok(Biases(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    format: String,
    graph: GraphDoc,
    h: Biases,
    #[serde(rename = "J")]
    j: Vec<(usize, usize, f64)>,
    h_range: Interval,
    #[serde(rename = "J_range")]
    j_range: Interval,
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<serde_json::Value>,
}

/// A parsed instance document.
#[derive(Debug, Clone)]
pub struct Instance {
    pub model: IsingModel,
    pub seed: Option<u64>,
    pub meta: Option<serde_json::Value>,
}

pub fn instance_to_json(model: &IsingModel, seed: Option<u64>, meta: Option<serde_json::Value>) -> String {
    let g = model.graph();
    let identity = g.labels().iter().enumerate().all(|(i, &l)| l == i as u64);
    let doc = InstanceDoc {
        format: INSTANCE_FORMAT.to_string(),
        graph: GraphDoc {
            family: g.family(),
            params: g.params().clone(),
            nodes: g.nodes().collect(),
            edges: g.edges().to_vec(),
            labels: (!identity).then(|| g.labels().to_vec()),
        },
        h: Biases(model.h().iter().copied().enumerate().collect()),
        j: model.couplings().collect(),
        h_range: model.h_range(),
        j_range: model.j_range(),
        seed,
        meta,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("instance serializes");
    s.push('\n');
    s
}

/// Parses an instance. Missing biases and couplings default to 0; a
/// coupling on a non-edge is an error.
pub fn instance_from_json(text: &str) -> Result<Instance, IoError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    if doc.format != INSTANCE_FORMAT {
        return Err(IoError::Format { expected: INSTANCE_FORMAT, found: doc.format });
    }
    let n = doc.graph.nodes.len();
    if doc.graph.nodes.iter().enumerate().any(|(i, &v)| i != v) {
        return Err(IoError::NodeIds(n));
    }
    let labels = doc.graph.labels.unwrap_or_else(|| (0..n as u64).collect());
    if labels.len() != n {
        return Err(IoError::NodeIds(n));
    }
    let (graph, _) = HardwareGraph::new(doc.graph.family, doc.graph.params, labels, doc.graph.edges)?;
    let h: BTreeMap<usize, f64> = doc.h.0.into_iter().collect();
    let j: BTreeMap<(usize, usize), f64> = doc.j.into_iter().map(|(a, b, v)| ((a, b), v)).collect();
    let model = IsingModel::from_maps(Arc::new(graph), &h, &j, doc.h_range, doc.j_range)?;
    Ok(Instance { model, seed: doc.seed, meta: doc.meta })
}

#[derive(Debug, Serialize, Deserialize)]
struct SamplesDoc {
    format: String,
    solver: String,
    params: BTreeMap<String, serde_json::Value>,
    seed: u64,
    records: Vec<SampleRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<serde_json::Value>,
}

pub fn samples_to_json(set: &SampleSet, meta: Option<serde_json::Value>) -> String {
    let doc = SamplesDoc {
        format: SAMPLES_FORMAT.to_string(),
        solver: set.solver_name.clone(),
        params: set.solver_params.clone(),
        seed: set.seed,
        records: set.records.clone(),
        meta,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("samples serialize");
    s.push('\n');
    s
}

pub fn samples_from_json(text: &str) -> Result<SampleSet, IoError> {
    let doc: SamplesDoc = serde_json::from_str(text)?;
    if doc.format != SAMPLES_FORMAT {
        return Err(IoError::Format { expected: SAMPLES_FORMAT, found: doc.format });
    }
    Ok(SampleSet::new(doc.solver, doc.params, doc.seed, doc.records)?)
}
