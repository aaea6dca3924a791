//! Substrate data model: IXPs, client endpoints and parallel pathlet edges.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::prefix::Ipv4Cidr;
use crate::Asn;

pub type PathletId = u64;

/// Dense index of a node inside a [`Multigraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeIdx(pub u32);

impl NodeIdx {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PathletKind {
    /// IXP to IXP across an ISP.
    Transit,
    /// Client endpoint to an IXP anchor across its access ISP.
    Access,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Ixp,
    Endpoint,
}

/// A capacitated, latency-annotated edge.
///
/// For access pathlets `ends[0]` is always the endpoint and `ends[1]` the IXP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pathlet {
    pub id: PathletId,
    pub kind: PathletKind,
    pub ends: [NodeIdx; 2],
    pub isp: Asn,
    pub capacity: u32,
    pub latency: u32,
    pub reserved: u32,
}

impl Pathlet {
    pub fn residual(&self) -> u32 {
        self.capacity - self.reserved
    }

    /// The end opposite to `node`, or `None` if `node` is not an end.
    pub fn other_end(&self, node: NodeIdx) -> Option<NodeIdx> {
        if self.ends[0] == node {
            Some(self.ends[1])
        } else if self.ends[1] == node {
            Some(self.ends[0])
        } else {
            None
        }
    }

    pub fn connects(&self, a: NodeIdx, b: NodeIdx) -> bool {
        (self.ends[0] == a && self.ends[1] == b) || (self.ends[0] == b && self.ends[1] == a)
    }
}

/// Construction input for a pathlet, with ends named by node id.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathletSpec {
    pub id: PathletId,
    pub kind: PathletKind,
    pub a: String,
    pub b: String,
    pub asn: Asn,
    pub capacity_mbps: u32,
    pub latency_ms: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub kind: NodeKind,
    /// Announced prefixes; always empty for IXPs.
    pub prefixes: Vec<Ipv4Cidr>,
    /// Incident pathlets in insertion order.
    pub incident: Vec<PathletId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate pathlet id {0}")]
    DuplicatePathlet(PathletId),
    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("unknown pathlet id {0}")]
    UnknownPathlet(PathletId),
    #[error("pathlet {0}: capacity and latency must be positive")]
    NonPositiveAttribute(PathletId),
    #[error("pathlet {0}: both ends are the same node")]
    SelfLoop(PathletId),
    #[error("pathlet {id}: {reason}")]
    KindMismatch { id: PathletId, reason: &'static str },
    #[error("endpoint {0:?} has no access pathlet")]
    EndpointWithoutAccess(String),
    #[error("demand must be positive")]
    ZeroDemand,
    #[error("pathlet {id}: residual {residual} below demand {demand}")]
    InsufficientResidual {
        id: PathletId,
        residual: u32,
        demand: u32,
    },
    #[error("pathlet {id}: release of {demand} exceeds reservation {reserved}")]
    ExcessRelease {
        id: PathletId,
        reserved: u32,
        demand: u32,
    },
}

/// IXPs and endpoints joined by parallel pathlets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multigraph {
    nodes: Vec<Node>,
    by_name: BTreeMap<String, NodeIdx>,
    pathlets: BTreeMap<PathletId, Pathlet>,
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    fn add_node(&mut self, name: &str, kind: NodeKind, prefixes: Vec<Ipv4Cidr>) -> Result<NodeIdx, GraphError> {
        if self.by_name.contains_key(name) {
            return Err(GraphError::DuplicateNode(name.into()));
        }
        let idx = NodeIdx(self.nodes.len() as u32);
        self.nodes.push(Node {
            name: name.into(),
            kind,
            prefixes,
            incident: Vec::new(),
        });
        self.by_name.insert(name.into(), idx);
        Ok(idx)
    }

    pub fn add_ixp(&mut self, name: &str) -> Result<NodeIdx, GraphError> {
        self.add_node(name, NodeKind::Ixp, Vec::new())
    }

    pub fn add_endpoint(&mut self, name: &str, prefixes: Vec<Ipv4Cidr>) -> Result<NodeIdx, GraphError> {
        self.add_node(name, NodeKind::Endpoint, prefixes)
    }

    /// Inserts a pathlet with zero reservation.
    pub fn add_pathlet(&mut self, spec: &PathletSpec) -> Result<PathletId, GraphError> {
        let id = spec.id;
        if self.pathlets.contains_key(&id) {
            return Err(GraphError::DuplicatePathlet(id));
        }
        let a = self.node(&spec.a)?;
        let b = self.node(&spec.b)?;
        if spec.capacity_mbps == 0 || spec.latency_ms == 0 {
            return Err(GraphError::NonPositiveAttribute(id));
        }
        if a == b {
            return Err(GraphError::SelfLoop(id));
        }
        let (ka, kb) = (self.nodes[a.index()].kind, self.nodes[b.index()].kind);
        let ends = match (spec.kind, ka, kb) {
            (PathletKind::Transit, NodeKind::Ixp, NodeKind::Ixp) => [a, b],
            (PathletKind::Transit, _, _) => {
                return Err(GraphError::KindMismatch {
                    id,
                    reason: "transit pathlets must join two IXPs",
                })
            }
            (PathletKind::Access, NodeKind::Endpoint, NodeKind::Ixp) => [a, b],
            (PathletKind::Access, NodeKind::Ixp, NodeKind::Endpoint) => [b, a],
            (PathletKind::Access, _, _) => {
                return Err(GraphError::KindMismatch {
                    id,
                    reason: "access pathlets must join one endpoint and one IXP",
                })
            }
        };
        self.pathlets.insert(
            id,
            Pathlet {
                id,
                kind: spec.kind,
                ends,
                isp: spec.asn,
                capacity: spec.capacity_mbps,
                latency: spec.latency_ms,
                reserved: 0,
            },
        );
        self.nodes[a.index()].incident.push(id);
        self.nodes[b.index()].incident.push(id);
        Ok(id)
    }

    /// Removes a pathlet together with any reservation it carries.
    pub fn remove_pathlet(&mut self, id: PathletId) -> Result<Pathlet, GraphError> {
        let p = self.pathlets.remove(&id).ok_or(GraphError::UnknownPathlet(id))?;
        for end in p.ends {
            self.nodes[end.index()].incident.retain(|&q| q != id);
        }
        Ok(p)
    }

    pub fn node(&self, name: &str) -> Result<NodeIdx, GraphError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownNode(name.into()))
    }

    pub fn node_info(&self, idx: NodeIdx) -> &Node {
        &self.nodes[idx.index()]
    }

    pub fn name(&self, idx: NodeIdx) -> &str {
        &self.nodes[idx.index()].name
    }

    pub fn kind(&self, idx: NodeIdx) -> NodeKind {
        self.nodes[idx.index()].kind
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeIdx, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeIdx(i as u32), n))
    }

    pub fn ixps(&self) -> impl Iterator<Item = NodeIdx> + '_ {
        self.nodes().filter(|(_, n)| n.kind == NodeKind::Ixp).map(|(i, _)| i)
    }

    pub fn endpoints(&self) -> impl Iterator<Item = NodeIdx> + '_ {
        self.nodes().filter(|(_, n)| n.kind == NodeKind::Endpoint).map(|(i, _)| i)
    }

    pub fn pathlet(&self, id: PathletId) -> Result<&Pathlet, GraphError> {
        self.pathlets.get(&id).ok_or(GraphError::UnknownPathlet(id))
    }

    /// Pathlets in ascending id order.
    pub fn pathlets(&self) -> impl Iterator<Item = &Pathlet> {
        self.pathlets.values()
    }

    pub fn pathlet_count(&self) -> usize {
        self.pathlets.len()
    }

    pub fn max_pathlet_id(&self) -> Option<PathletId> {
        self.pathlets.keys().next_back().copied()
    }

    pub fn incident(&self, node: NodeIdx) -> &[PathletId] {
        &self.nodes[node.index()].incident
    }

    pub fn reserve(&mut self, id: PathletId, demand: u32) -> Result<(), GraphError> {
        if demand == 0 {
            return Err(GraphError::ZeroDemand);
        }
        let p = self.pathlets.get_mut(&id).ok_or(GraphError::UnknownPathlet(id))?;
        if p.residual() < demand {
            return Err(GraphError::InsufficientResidual {
                id,
                residual: p.residual(),
                demand,
            });
        }
        p.reserved += demand;
        Ok(())
    }

    pub fn release(&mut self, id: PathletId, demand: u32) -> Result<(), GraphError> {
        if demand == 0 {
            return Err(GraphError::ZeroDemand);
        }
        let p = self.pathlets.get_mut(&id).ok_or(GraphError::UnknownPathlet(id))?;
        if p.reserved < demand {
            return Err(GraphError::ExcessRelease {
                id,
                reserved: p.reserved,
                demand,
            });
        }
        p.reserved -= demand;
        Ok(())
    }

    /// Number of pathlets whose end set is `{a, b}`.
    pub fn parallel_edge_count(&self, a: &str, b: &str) -> Result<usize, GraphError> {
        let (a, b) = (self.node(a)?, self.node(b)?);
        if a == b {
            return Ok(0);
        }
        Ok(self
            .incident(a)
            .iter()
            .filter(|&&id| self.pathlets[&id].connects(a, b))
            .count())
    }

    pub fn feasible_view<'g>(&'g self, demand: u32, excluded: &'g BTreeSet<PathletId>) -> FeasibleView<'g> {
        FeasibleView {
            graph: self,
            demand,
            excluded: Some(excluded),
        }
    }

    /// View filtered by demand only.
    pub fn demand_view(&self, demand: u32) -> FeasibleView<'_> {
        FeasibleView {
            graph: self,
            demand,
            excluded: None,
        }
    }

    /// Per-pathlet `(id, reserved)` snapshot, for state comparisons.
    pub fn reservations(&self) -> Vec<(PathletId, u32)> {
        self.pathlets.values().map(|p| (p.id, p.reserved)).collect()
    }

    /// Copy with every reservation cleared.
    pub fn pristine(&self) -> Multigraph {
        let mut g = self.clone();
        for p in g.pathlets.values_mut() {
            p.reserved = 0;
        }
        g
    }

    /// Checks the structural invariants: adjacency mirrors pathlet ends, ends
    /// have the right kinds, reservations are within capacity and every
    /// endpoint owns at least one access pathlet.
    pub fn validate(&self) -> Result<(), GraphError> {
        for p in self.pathlets.values() {
            if p.capacity == 0 || p.latency == 0 {
                return Err(GraphError::NonPositiveAttribute(p.id));
            }
            if p.reserved > p.capacity {
                return Err(GraphError::InsufficientResidual {
                    id: p.id,
                    residual: 0,
                    demand: p.reserved,
                });
            }
            for end in p.ends {
                if !self.nodes[end.index()].incident.contains(&p.id) {
                    return Err(GraphError::UnknownPathlet(p.id));
                }
            }
        }
        for (idx, n) in self.nodes() {
            for id in &n.incident {
                let p = self.pathlet(*id)?;
                if p.other_end(idx).is_none() {
                    return Err(GraphError::UnknownPathlet(*id));
                }
            }
            if n.kind == NodeKind::Endpoint && n.incident.is_empty() {
                return Err(GraphError::EndpointWithoutAccess(n.name.clone()));
            }
        }
        Ok(())
    }
}

/// Borrowed view of the pathlets with `residual >= demand` that are not
/// excluded. The underlying graph is never modified through a view.
#[derive(Debug, Clone, Copy)]
pub struct FeasibleView<'g> {
    graph: &'g Multigraph,
    demand: u32,
    excluded: Option<&'g BTreeSet<PathletId>>,
}

impl<'g> FeasibleView<'g> {
    pub fn graph(&self) -> &'g Multigraph {
        self.graph
    }

    pub fn demand(&self) -> u32 {
        self.demand
    }

    pub fn admits(&self, p: &Pathlet) -> bool {
        p.residual() >= self.demand && !self.excluded.is_some_and(|ex| ex.contains(&p.id))
    }

    pub fn contains(&self, id: PathletId) -> bool {
        self.graph.pathlets.get(&id).is_some_and(|p| self.admits(p))
    }

    pub fn pathlets(&self) -> impl Iterator<Item = &'g Pathlet> + '_ {
        self.graph.pathlets.values().filter(move |p| self.admits(p))
    }

    /// Admitted pathlets incident to `node` paired with their far end.
    pub fn neighbors(&self, node: NodeIdx) -> impl Iterator<Item = (&'g Pathlet, NodeIdx)> + '_ {
        let graph = self.graph;
        graph.nodes[node.index()].incident.iter().filter_map(move |id| {
            let p = &graph.pathlets[id];
            if self.admits(p) {
                p.other_end(node).map(|other| (p, other))
            } else {
                None
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, g1};
    use alloc::vec;

    fn transit(id: PathletId, a: &str, b: &str, asn: Asn, cap: u32, lat: u32) -> PathletSpec {
        PathletSpec {
            id,
            kind: PathletKind::Transit,
            a: a.into(),
            b: b.into(),
            asn,
            capacity_mbps: cap,
            latency_ms: lat,
        }
    }

    fn two_ixps() -> Multigraph {
        let mut g = Multigraph::new();
        g.add_ixp("X1").unwrap();
        g.add_ixp("X2").unwrap();
        g
    }

    #[test]
    fn parallel_edges_and_duplicates() {
        let mut g = two_ixps();
        g.add_pathlet(&transit(1, "X1", "X2", 100, 100, 10)).unwrap();
        assert_eq!(g.parallel_edge_count("X1", "X2"), Ok(1));
        g.add_pathlet(&transit(2, "X1", "X2", 200, 50, 5)).unwrap();
        assert_eq!(g.parallel_edge_count("X2", "X1"), Ok(2));
        assert_eq!(
            g.add_pathlet(&transit(1, "X1", "X2", 100, 100, 10)),
            Err(GraphError::DuplicatePathlet(1))
        );
        assert_eq!(g.pathlet_count(), 2);
        g.validate().unwrap();
    }

    #[test]
    fn construction_errors() {
        let mut g = two_ixps();
        assert_eq!(
            g.add_pathlet(&transit(1, "X1", "X9", 1, 1, 1)),
            Err(GraphError::UnknownNode("X9".into()))
        );
        assert_eq!(
            g.add_pathlet(&transit(1, "X1", "X2", 1, 0, 1)),
            Err(GraphError::NonPositiveAttribute(1))
        );
        assert_eq!(
            g.add_pathlet(&transit(1, "X1", "X2", 1, 1, 0)),
            Err(GraphError::NonPositiveAttribute(1))
        );
        assert_eq!(
            g.add_pathlet(&transit(1, "X1", "X1", 1, 1, 1)),
            Err(GraphError::SelfLoop(1))
        );
        g.add_endpoint("E", vec![]).unwrap();
        assert!(matches!(
            g.add_pathlet(&transit(1, "E", "X1", 1, 1, 1)),
            Err(GraphError::KindMismatch { .. })
        ));
        // endpoint still lacks an access pathlet
        assert_eq!(g.validate(), Err(GraphError::EndpointWithoutAccess("E".into())));
        let mut access = transit(2, "X1", "E", 1, 1, 1);
        access.kind = PathletKind::Access;
        g.add_pathlet(&access).unwrap();
        let p = g.pathlet(2).unwrap();
        assert_eq!(g.name(p.ends[0]), "E");
        g.validate().unwrap();
    }

    #[test]
    fn reserve_and_release_boundaries() {
        let mut g = g1();
        let p1 = fixtures::P1;
        g.reserve(p1, 40).unwrap();
        assert_eq!(g.pathlet(p1).unwrap().reserved, 40);
        assert_eq!(g.pathlet(p1).unwrap().residual(), 60);
        g.reserve(p1, 20).unwrap();
        assert_eq!(
            g.reserve(p1, 41),
            Err(GraphError::InsufficientResidual {
                id: p1,
                residual: 40,
                demand: 41
            })
        );
        g.reserve(p1, 40).unwrap();
        assert_eq!(g.pathlet(p1).unwrap().residual(), 0);
        assert_eq!(g.reserve(99, 1), Err(GraphError::UnknownPathlet(99)));
        assert_eq!(g.reserve(p1, 0), Err(GraphError::ZeroDemand));

        let mut g = g1();
        g.reserve(p1, 40).unwrap();
        assert!(matches!(g.release(p1, 41), Err(GraphError::ExcessRelease { .. })));
        g.release(p1, 40).unwrap();
        assert_eq!(g, g1());
    }

    #[test]
    fn g1_parallel_counts() {
        let g = g1();
        assert_eq!(g.parallel_edge_count("X1", "X2"), Ok(2));
        assert_eq!(g.parallel_edge_count("X1", "X3"), Ok(1));
        assert_eq!(g.parallel_edge_count("X2", "X2"), Ok(0));
        assert!(g.parallel_edge_count("X1", "nope").is_err());
    }

    #[test]
    fn feasible_view_filters() {
        let g = g1();
        let none = BTreeSet::new();
        let ids = |v: FeasibleView<'_>| v.pathlets().map(|p| p.id).collect::<BTreeSet<_>>();
        let expect: BTreeSet<_> = [fixtures::A1, fixtures::A2, fixtures::P1, fixtures::P3].into();
        assert_eq!(ids(g.feasible_view(60, &none)), expect);

        let ex: BTreeSet<_> = [fixtures::P3].into();
        let expect: BTreeSet<_> = [fixtures::A1, fixtures::A2, fixtures::P1, fixtures::P2, fixtures::P4].into();
        assert_eq!(ids(g.feasible_view(20, &ex)), expect);

        assert_eq!(g.feasible_view(1_000_000, &none).pathlets().count(), 0);
        assert_eq!(g, g1());
    }

    #[test]
    fn removal_updates_adjacency() {
        let mut g = g1();
        g.reserve(fixtures::P3, 10).unwrap();
        g.remove_pathlet(fixtures::P3).unwrap();
        assert_eq!(g.parallel_edge_count("X2", "X3"), Ok(0));
        assert!(g.incident(g.node("X2").unwrap()).iter().all(|&id| id != fixtures::P3));
        g.validate().unwrap();
        assert_eq!(g.remove_pathlet(fixtures::P3), Err(GraphError::UnknownPathlet(fixtures::P3)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn reserve_release_round_trip(id in prop::sample::select(fixtures::ALL.to_vec()), d in 1u32..=1000) {
                let mut g = g1();
                let before = g.clone();
                if g.reserve(id, d).is_ok() {
                    prop_assert!(g.pathlet(id).unwrap().reserved <= g.pathlet(id).unwrap().capacity);
                    g.release(id, d).unwrap();
                }
                prop_assert_eq!(g, before);
            }

            #[test]
            fn view_never_holds_thin_pathlets(d in 1u32..=1200, pre in 0u32..=50) {
                let mut g = g1();
                g.reserve(fixtures::P1, pre.max(1)).unwrap();
                let none = BTreeSet::new();
                for p in g.feasible_view(d, &none).pathlets() {
                    prop_assert!(p.residual() >= d);
                }
            }
        }
    }
}
