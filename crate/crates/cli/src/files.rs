//! On-disk JSON schemas: instances, cluster graphs, solutions, results and
//! kernelization reports. Field order is fixed by the struct definitions
//! and kept stable for golden files.

use dynce_core::graph::{ClusterGraph, Graph};
use dynce_core::instance::{Instance, Measure, Solution, Variant};
use dynce_core::kernel::TraceEntry;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceFile {
    pub version: u32,
    pub variant: String,
    pub measure: String,
    pub n: usize,
    pub g_edges: Vec<[usize; 2]>,
    pub gc_clusters: Vec<Vec<usize>>,
    pub k: i64,
    pub d: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClustersFile {
    pub version: u32,
    pub n: usize,
    pub clusters: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SolutionFile {
    pub version: u32,
    pub clusters: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResultFile {
    pub decision: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_scope: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_clusters: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edits: Option<Vec<(usize, usize, String)>>,
    pub stats: ResultStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRec>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResultStats {
    pub solver: String,
    pub runtime_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_vertices_before: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_vertices_after: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TraceRec {
    pub rule: String,
    pub effect: String,
    pub dk: i64,
    pub dd: i64,
    pub vertices: Vec<usize>,
}

impl From<&TraceEntry> for TraceRec {
    fn from(e: &TraceEntry) -> Self {
        TraceRec {
            rule: e.rule.as_str().to_string(),
            effect: e.effect.clone(),
            dk: e.dk,
            dd: e.dd,
            vertices: e.removed.iter().chain(&e.added).copied().collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KernelizeReport {
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_rule: Option<String>,
    pub vertices_before: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices_after: Option<usize>,
    /// Value of the measure's kernel vertex-bound formula at the residual
    /// parameters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<InstanceFile>,
    pub trace: Vec<TraceRec>,
}

/// Semantic validation failure with a field-level diagnostic.
#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SchemaError {}

fn err<T>(msg: impl Into<String>) -> Result<T, SchemaError> {
    Err(SchemaError(msg.into()))
}

pub fn parse_variant(s: &str) -> Result<Variant, SchemaError> {
    match s {
        "editing" => Ok(Variant::Editing),
        "deletion" => Ok(Variant::Deletion),
        "completion" => Ok(Variant::Completion),
        other => err(format!(
            "variant: expected editing|deletion|completion, got {other:?}"
        )),
    }
}

pub fn parse_measure(s: &str) -> Result<Measure, SchemaError> {
    match s {
        "matching" => Ok(Measure::MatchingDist),
        "edge" => Ok(Measure::EdgeDist),
        other => err(format!("measure: expected matching|edge, got {other:?}")),
    }
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        InstanceFile {
            version: FORMAT_VERSION,
            variant: inst.variant.to_string(),
            measure: inst.measure.to_string(),
            n: inst.n(),
            g_edges: inst.g.edges().map(|(u, v)| [u, v]).collect(),
            gc_clusters: inst.gc.clusters().to_vec(),
            k: inst.k,
            d: inst.d,
        }
    }

    /// Validates and converts into an in-memory instance. External
    /// instances must carry nonnegative parameters.
    pub fn to_instance(&self) -> Result<Instance, SchemaError> {
        if self.version != FORMAT_VERSION {
            return err(format!(
                "version: expected {FORMAT_VERSION}, got {}",
                self.version
            ));
        }
        let variant = parse_variant(&self.variant)?;
        let measure = parse_measure(&self.measure)?;
        if self.k < 0 {
            return err(format!("k: must be nonnegative, got {}", self.k));
        }
        if self.d < 0 {
            return err(format!("d: must be nonnegative, got {}", self.d));
        }
        for (i, &[u, v]) in self.g_edges.iter().enumerate() {
            if u >= self.n || v >= self.n {
                return err(format!(
                    "g_edges[{i}]: endpoint out of range for n = {}",
                    self.n
                ));
            }
            if u == v {
                return err(format!("g_edges[{i}]: self-loop on vertex {u}"));
            }
        }
        let g = Graph::from_edges(self.n, self.g_edges.iter().map(|&[u, v]| (u, v)))
            .map_err(|e| SchemaError(format!("g_edges: {e}")))?;
        let gc = ClusterGraph::from_clusters(self.n, self.gc_clusters.clone())
            .map_err(|e| SchemaError(format!("gc_clusters: {e}")))?;
        Instance::new(variant, measure, g, gc, self.k, self.d)
            .map_err(|e| SchemaError(e.to_string()))
    }
}

impl ClustersFile {
    pub fn from_clusters(c: &ClusterGraph) -> Self {
        ClustersFile {
            version: FORMAT_VERSION,
            n: c.n(),
            clusters: c.clusters().to_vec(),
        }
    }

    pub fn to_clusters(&self) -> Result<ClusterGraph, SchemaError> {
        if self.version != FORMAT_VERSION {
            return err(format!(
                "version: expected {FORMAT_VERSION}, got {}",
                self.version
            ));
        }
        ClusterGraph::from_clusters(self.n, self.clusters.clone())
            .map_err(|e| SchemaError(format!("clusters: {e}")))
    }
}

impl SolutionFile {
    pub fn to_solution(&self, inst: &Instance) -> Result<Solution, SchemaError> {
        if self.version != FORMAT_VERSION {
            return err(format!(
                "version: expected {FORMAT_VERSION}, got {}",
                self.version
            ));
        }
        let gprime = ClusterGraph::from_clusters(inst.n(), self.clusters.clone())
            .map_err(|e| SchemaError(format!("clusters: {e}")))?;
        Solution::new(&inst.g, gprime).map_err(|e| SchemaError(e.to_string()))
    }
}

/// Edit records for result files: `(u, v, "ins"|"del")` relative to the
/// solved instance's graph.
pub fn edit_records(inst: &Instance, sol: &Solution) -> Vec<(usize, usize, String)> {
    sol.edits
        .iter()
        .map(|&(u, v)| {
            let kind = if inst.g.has_edge(u, v) { "del" } else { "ins" };
            (u, v, kind.to_string())
        })
        .collect()
}
