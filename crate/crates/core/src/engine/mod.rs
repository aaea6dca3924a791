//! Online QoS path embedding on the multigraph.
//!
//! Admission works in two stages: a sampler generates feasible candidate
//! paths (minimum-latency search, k shortest paths or random walks) and a
//! [`SelectionPolicy`] picks one to reserve. [`EngineState`] owns the
//! substrate and the live embeddings and implements admission, release,
//! hybrid re-embedding and failure recovery. [`offline_optimal`] is an
//! exhaustive reference for small instances.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::graph::{GraphError, Multigraph, NodeIdx, PathletId, PathletKind};

mod oracle;
mod paths;
mod select;
mod state;

pub use oracle::{offline_optimal, OracleError, OracleLimits, OracleSolution};
pub use paths::{
    check_path, enumerate_paths, k_shortest_paths, min_latency_path, random_walk_paths, sample_paths, PathDefect,
};
pub use select::{rank_paths, select_path};
pub use state::{Admission, Embedding, EngineState, FailureReport, HybridOutcome, Reembed};

pub type RequestId = u64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("unknown endpoint {0:?}")]
    UnknownEndpoint(String),
    #[error("request {0}: source and destination coincide")]
    SameEndpoints(RequestId),
    #[error("request {0}: demand and latency bound must be positive")]
    NonPositiveRequest(RequestId),
    #[error("request {0} is already live")]
    DuplicateRequest(RequestId),
    #[error("no live embedding for request {0}")]
    UnknownEmbedding(RequestId),
    #[error("candidate list is empty")]
    EmptyCandidates,
    #[error("sampler parameters must be positive")]
    InvalidSampler,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A timed demand between two endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub id: RequestId,
    pub src: String,
    pub dst: String,
    /// Mbps.
    pub demand: u32,
    /// ms, end to end including access pathlets.
    pub latency_bound: u32,
    /// Seconds.
    pub arrival: f64,
    /// Seconds.
    pub duration: f64,
    pub wants_backup: bool,
}

impl Request {
    /// A concurrent request with no timing information.
    pub fn new(id: RequestId, src: &str, dst: &str, demand: u32, latency_bound: u32) -> Self {
        Request {
            id,
            src: src.into(),
            dst: dst.into(),
            demand,
            latency_bound,
            arrival: 0.0,
            duration: 1.0,
            wants_backup: false,
        }
    }

    pub fn with_backup(mut self) -> Self {
        self.wants_backup = true;
        self
    }
}

/// Ordered pathlet ids from the source endpoint to the destination endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub pathlets: Vec<PathletId>,
    pub total_latency: u64,
}

impl Path {
    pub fn hops(&self) -> usize {
        self.pathlets.len()
    }

    /// Node sequence starting at `src`; `None` if the pathlets do not chain.
    pub fn nodes(&self, graph: &Multigraph, src: NodeIdx) -> Option<Vec<NodeIdx>> {
        let mut nodes = Vec::with_capacity(self.pathlets.len() + 1);
        nodes.push(src);
        let mut cur = src;
        for id in &self.pathlets {
            cur = graph.pathlet(*id).ok()?.other_end(cur)?;
            nodes.push(cur);
        }
        Some(nodes)
    }

    pub fn transit_pathlets(&self, graph: &Multigraph) -> BTreeSet<PathletId> {
        self.pathlets
            .iter()
            .copied()
            .filter(|id| graph.pathlet(*id).is_ok_and(|p| p.kind == PathletKind::Transit))
            .collect()
    }

    /// IXPs strictly between the two anchors.
    pub fn intermediate_ixps(&self, graph: &Multigraph, src: NodeIdx) -> BTreeSet<NodeIdx> {
        match self.nodes(graph, src) {
            Some(nodes) if nodes.len() > 4 => nodes[2..nodes.len() - 2].iter().copied().collect(),
            _ => BTreeSet::new(),
        }
    }
}

/// Shortest-path order: latency, then pathlet-id sequence.
pub fn latency_order(a: &Path, b: &Path) -> Ordering {
    a.total_latency
        .cmp(&b.total_latency)
        .then_with(|| a.pathlets.cmp(&b.pathlets))
}

/// Total order on candidates: latency, hops, pathlet-id sequence.
pub fn candidate_order(a: &Path, b: &Path) -> Ordering {
    a.total_latency
        .cmp(&b.total_latency)
        .then_with(|| a.hops().cmp(&b.hops()))
        .then_with(|| a.pathlets.cmp(&b.pathlets))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SamplerMethod {
    Dijkstra,
    #[default]
    Ksp,
    RandomWalk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SamplerConfig {
    pub method: SamplerMethod,
    pub k: u32,
    pub walks: u32,
    pub max_len: u32,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            method: SamplerMethod::Ksp,
            k: 5,
            walks: 32,
            max_len: 8,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn dijkstra() -> Self {
        SamplerConfig {
            method: SamplerMethod::Dijkstra,
            ..Default::default()
        }
    }

    pub fn ksp(k: u32) -> Self {
        SamplerConfig {
            method: SamplerMethod::Ksp,
            k,
            ..Default::default()
        }
    }

    pub fn random_walk(walks: u32, max_len: u32, seed: u64) -> Self {
        SamplerConfig {
            method: SamplerMethod::RandomWalk,
            walks,
            max_len,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let ok = match self.method {
            SamplerMethod::Dijkstra => true,
            SamplerMethod::Ksp => self.k > 0,
            SamplerMethod::RandomWalk => self.walks > 0 && self.max_len > 0,
        };
        if ok {
            Ok(())
        } else {
            Err(EngineError::InvalidSampler)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SelectionPolicy {
    #[default]
    MinLatency,
    MinHops,
    /// Largest bottleneck residual.
    Widest,
    /// Smallest sum of demand/residual over the path.
    LeastStress,
}
