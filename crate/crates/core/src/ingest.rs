//! Multigraph synthesis from IXP membership tables.
//!
//! Every pair of IXPs gets one transit pathlet per ASN that is a member of
//! both. Membership data carries no QoS attributes, so capacities and
//! latencies are drawn from a seeded [`PathletSynthesisPolicy`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::graph::{GraphError, Multigraph, NodeIdx, NodeKind, PathletKind, PathletSpec};
use crate::prefix::Ipv4Cidr;
use crate::rng::{self, stream};
use crate::Asn;

/// Private-use ASN for access pathlets whose IXP has no known member.
pub const FALLBACK_ACCESS_ASN: Asn = 64_512;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IngestError {
    #[error("ASN must be positive")]
    ZeroAsn,
    #[error("membership table is empty")]
    EmptyTable,
    #[error("invalid attribute model {0:?}; expected constant:N or uniform:LO:HI")]
    BadModel(String),
    #[error("attribute range must satisfy 0 < lo <= hi")]
    BadRange,
    #[error("graph has fewer IXPs ({0}) than access pathlets per endpoint")]
    NotEnoughIxps(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// IXP id → member ASNs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MembershipTable {
    members: BTreeMap<String, BTreeSet<Asn>>,
}

impl MembershipTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a membership; duplicates collapse.
    pub fn insert(&mut self, ixp: &str, asn: Asn) -> Result<(), IngestError> {
        if asn == 0 {
            return Err(IngestError::ZeroAsn);
        }
        self.members.entry(ixp.into()).or_default().insert(asn);
        Ok(())
    }

    pub fn members(&self, ixp: &str) -> Option<&BTreeSet<Asn>> {
        self.members.get(ixp)
    }

    /// IXPs in lexicographic order with their members.
    pub fn iter(&self) -> impl Iterator<Item = (&String, &BTreeSet<Asn>)> {
        self.members.iter()
    }

    pub fn ixp_count(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_ixp(&self, ixp: &str) -> bool {
        self.members.contains_key(ixp)
    }
}

impl<S: AsRef<str>> FromIterator<(S, Asn)> for MembershipTable {
    /// Builds a table; zero ASNs are skipped.
    fn from_iter<I: IntoIterator<Item = (S, Asn)>>(iter: I) -> Self {
        let mut t = MembershipTable::new();
        for (ixp, asn) in iter {
            let _ = t.insert(ixp.as_ref(), asn);
        }
        t
    }
}

/// Inclusive integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UniformRange {
    pub lo: u32,
    pub hi: u32,
}

impl UniformRange {
    pub fn new(lo: u32, hi: u32) -> Self {
        UniformRange { lo, hi }
    }

    pub fn is_valid(&self) -> bool {
        self.lo > 0 && self.lo <= self.hi
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> u32 {
        rng.gen_range(self.lo..=self.hi)
    }
}

/// How one pathlet attribute is synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeModel {
    Constant(u32),
    Uniform(UniformRange),
}

impl AttributeModel {
    pub fn validate(&self) -> Result<(), IngestError> {
        let ok = match self {
            AttributeModel::Constant(c) => *c > 0,
            AttributeModel::Uniform(r) => r.is_valid(),
        };
        if ok {
            Ok(())
        } else {
            Err(IngestError::BadRange)
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> u32 {
        match self {
            AttributeModel::Constant(c) => *c,
            AttributeModel::Uniform(r) => r.sample(rng),
        }
    }
}

impl FromStr for AttributeModel {
    type Err = IngestError;

    /// Parses `constant:N` or `uniform:LO:HI`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IngestError::BadModel(s.into());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |p: &str| p.parse::<u32>().map_err(|_| bad());
        let model = match parts.as_slice() {
            ["constant", n] => AttributeModel::Constant(num(n)?),
            ["uniform", lo, hi] => AttributeModel::Uniform(UniformRange::new(num(lo)?, num(hi)?)),
            _ => return Err(bad()),
        };
        model.validate()?;
        Ok(model)
    }
}

impl fmt::Display for AttributeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttributeModel::Constant(c) => write!(f, "constant:{c}"),
            AttributeModel::Uniform(r) => write!(f, "uniform:{}:{}", r.lo, r.hi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathletSynthesisPolicy {
    pub capacity: AttributeModel,
    pub latency: AttributeModel,
    pub seed: u64,
}

impl Default for PathletSynthesisPolicy {
    fn default() -> Self {
        PathletSynthesisPolicy {
            capacity: AttributeModel::Uniform(UniformRange::new(100, 1000)),
            latency: AttributeModel::Uniform(UniformRange::new(5, 50)),
            seed: 0,
        }
    }
}

/// Transit pathlet triples `(ixp_a, asn, ixp_b)` with `ixp_a < ixp_b`, sorted
/// by `(ixp_a, ixp_b, asn)`.
pub fn shared_member_triples(table: &MembershipTable) -> Vec<(&str, Asn, &str)> {
    let ixps: Vec<(&String, &BTreeSet<Asn>)> = table.iter().collect();
    let mut out = Vec::new();
    for (i, (a, ma)) in ixps.iter().enumerate() {
        for (b, mb) in &ixps[i + 1..] {
            for asn in ma.intersection(mb) {
                out.push((a.as_str(), *asn, b.as_str()));
            }
        }
    }
    out
}

/// Builds the inter-IXP multigraph: one transit pathlet per (IXP pair, shared
/// member). Pathlet ids are assigned from 0 in `(ixp_a, ixp_b, asn)` order and
/// attributes are drawn in that same order, capacity first.
pub fn build_multigraph(table: &MembershipTable, policy: &PathletSynthesisPolicy) -> Result<Multigraph, IngestError> {
    if table.is_empty() {
        return Err(IngestError::EmptyTable);
    }
    policy.capacity.validate()?;
    policy.latency.validate()?;
    let mut g = Multigraph::new();
    for (ixp, _) in table.iter() {
        g.add_ixp(ixp)?;
    }
    let mut rng = rng::stream_rng(policy.seed, stream::SYNTHESIS);
    for (id, (a, asn, b)) in shared_member_triples(table).into_iter().enumerate() {
        let capacity_mbps = policy.capacity.sample(&mut rng);
        let latency_ms = policy.latency.sample(&mut rng);
        g.add_pathlet(&PathletSpec {
            id: id as u64,
            kind: PathletKind::Transit,
            a: a.into(),
            b: b.into(),
            asn,
            capacity_mbps,
            latency_ms,
        })?;
    }
    Ok(g)
}

/// Synthetic client endpoints attached to random IXP anchors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EndpointSynthesis {
    pub count: u32,
    pub access_per_endpoint: u32,
    pub capacity: UniformRange,
    pub latency: UniformRange,
}

impl Default for EndpointSynthesis {
    fn default() -> Self {
        EndpointSynthesis {
            count: 20,
            access_per_endpoint: 2,
            capacity: UniformRange::new(1000, 10_000),
            latency: UniformRange::new(1, 5),
        }
    }
}

/// Adds `count` endpoints named `ep<i>`, each with `access_per_endpoint`
/// access pathlets to distinct random IXPs. Endpoint `i` announces one prefix
/// inside `(i mod 223 + 1).0.0.0/8` with a random length in `/8..=/24`.
/// Access ISPs are taken from a random transit pathlet at the anchor, or
/// [`FALLBACK_ACCESS_ASN`] if the anchor has none.
pub fn attach_endpoints(graph: &mut Multigraph, synth: &EndpointSynthesis, seed: u64) -> Result<(), IngestError> {
    if !synth.capacity.is_valid() || !synth.latency.is_valid() {
        return Err(IngestError::BadRange);
    }
    let ixps: Vec<NodeIdx> = graph.ixps().collect();
    let per = synth.access_per_endpoint as usize;
    if per == 0 || ixps.len() < per {
        return Err(IngestError::NotEnoughIxps(ixps.len()));
    }
    let mut rng = rng::stream_rng(seed, stream::ENDPOINTS);
    let mut next_id = graph.max_pathlet_id().map_or(0, |m| m + 1);
    for i in 0..synth.count {
        let name = format!("ep{i}");
        let len: u8 = rng.gen_range(8..=24);
        let base = ((i % 223) + 1) << 24;
        let host: u32 = rng.gen::<u32>() & 0x00FF_FFFF;
        let prefix = Ipv4Cidr::new((base | host).into(), len).map_err(|_| IngestError::BadRange)?;
        graph.add_endpoint(&name, alloc::vec![prefix])?;
        let anchors = rand::seq::index::sample(&mut rng, ixps.len(), per);
        let mut anchors: Vec<usize> = anchors.into_iter().collect();
        anchors.sort_unstable();
        for a in anchors {
            let ixp = ixps[a];
            let transit: Vec<_> = graph
                .incident(ixp)
                .iter()
                .filter_map(|id| graph.pathlet(*id).ok())
                .filter(|p| p.kind == PathletKind::Transit)
                .map(|p| p.isp)
                .collect();
            let asn = if transit.is_empty() {
                FALLBACK_ACCESS_ASN
            } else {
                transit[rng.gen_range(0..transit.len())]
            };
            let capacity_mbps = synth.capacity.sample(&mut rng);
            let latency_ms = synth.latency.sample(&mut rng);
            debug_assert_eq!(graph.kind(ixp), NodeKind::Ixp);
            graph.add_pathlet(&PathletSpec {
                id: next_id,
                kind: PathletKind::Access,
                a: name.clone(),
                b: graph.name(ixp).into(),
                asn,
                capacity_mbps,
                latency_ms,
            })?;
            next_id += 1;
        }
    }
    Ok(())
}
