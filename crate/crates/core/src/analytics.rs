//! Multigraph measurements: per-pair pathlet diversity and IPv4 coverage of
//! IXP anchor deployments.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::{Multigraph, NodeIdx, PathletKind};
use crate::ingest::MembershipTable;
use crate::prefix::{Ipv4Cidr, PrefixSet, IPV4_SPACE};
use crate::Asn;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalyticsError {
    #[error("graph has no transit pathlets")]
    NoTransit,
    #[error("unknown anchor IXP {0:?}")]
    UnknownAnchor(String),
    #[error("k = {k} outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("AS{0} cannot be its own customer")]
    SelfRelationship(Asn),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcdfPoint<T> {
    pub value: T,
    /// Fraction of samples `>= value`.
    pub fraction: f64,
}

/// Empirical complementary CDF over distinct sample values.
#[derive(Debug, Clone, PartialEq)]
pub struct Ccdf<T> {
    pub points: Vec<CcdfPoint<T>>,
}

/// `fraction(v) = |{x : x >= v}| / n` for each distinct `v`, ascending.
pub fn ccdf<T: Ord + Clone>(values: &[T]) -> Ccdf<T> {
    let mut sorted = values.to_vec();
    sorted.sort();
    let n = sorted.len();
    let mut points = Vec::new();
    let mut i = 0;
    while i < n {
        let v = sorted[i].clone();
        points.push(CcdfPoint {
            fraction: (n - i) as f64 / n as f64,
            value: v,
        });
        while i < n && sorted[i] == points[points.len() - 1].value {
            i += 1;
        }
    }
    Ccdf { points }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMultiplicity {
    pub ixp_a: String,
    pub ixp_b: String,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityStats {
    /// Connected IXP pairs, `ixp_a < ixp_b`, sorted.
    pub pairs: Vec<PairMultiplicity>,
    pub multiplicity_ccdf: Ccdf<u64>,
    /// Collapsed simple-graph baseline: every connected pair counts once.
    pub direct_ccdf: Ccdf<u64>,
    /// Degree of each IXP in the collapsed graph, sorted by IXP id.
    pub collapsed_degrees: Vec<(String, u64)>,
    pub degree_ccdf: Ccdf<u64>,
    pub transit_pathlets: u64,
}

impl MultiplicityStats {
    /// Lower median of the per-pair multiplicities.
    pub fn median_multiplicity(&self) -> u64 {
        let mut m: Vec<u64> = self.pairs.iter().map(|p| p.multiplicity).collect();
        m.sort_unstable();
        m.get(m.len().saturating_sub(1) / 2).copied().unwrap_or(0)
    }
}

pub fn pair_multiplicity_stats(graph: &Multigraph) -> Result<MultiplicityStats, AnalyticsError> {
    let mut counts: BTreeMap<(&str, &str), u64> = BTreeMap::new();
    let mut transit = 0;
    for p in graph.pathlets().filter(|p| p.kind == PathletKind::Transit) {
        let (a, b) = (graph.name(p.ends[0]), graph.name(p.ends[1]));
        let key = if a < b { (a, b) } else { (b, a) };
        *counts.entry(key).or_default() += 1;
        transit += 1;
    }
    if transit == 0 {
        return Err(AnalyticsError::NoTransit);
    }
    let mut degree: BTreeMap<&str, u64> = graph.ixps().map(|i: NodeIdx| (graph.name(i), 0)).collect();
    for (a, b) in counts.keys() {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
    }
    let multiplicities: Vec<u64> = counts.values().copied().collect();
    let ones: Vec<u64> = counts.values().map(|_| 1).collect();
    let degrees: Vec<u64> = degree.values().copied().collect();
    Ok(MultiplicityStats {
        pairs: counts
            .iter()
            .map(|((a, b), m)| PairMultiplicity {
                ixp_a: (*a).into(),
                ixp_b: (*b).into(),
                multiplicity: *m,
            })
            .collect(),
        multiplicity_ccdf: ccdf(&multiplicities),
        direct_ccdf: ccdf(&ones),
        degree_ccdf: ccdf(&degrees),
        collapsed_degrees: degree.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        transit_pathlets: transit,
    })
}

/// Provider ASN → direct customer ASNs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AsRelationships {
    customers: BTreeMap<Asn, BTreeSet<Asn>>,
}

impl AsRelationships {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, provider: Asn, customer: Asn) -> Result<(), AnalyticsError> {
        if provider == customer {
            return Err(AnalyticsError::SelfRelationship(provider));
        }
        self.customers.entry(provider).or_default().insert(customer);
        Ok(())
    }

    pub fn customers(&self, provider: Asn) -> impl Iterator<Item = Asn> + '_ {
        self.customers.get(&provider).into_iter().flatten().copied()
    }

    pub fn len(&self) -> usize {
        self.customers.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.customers.is_empty()
    }
}

/// ASN → originated prefixes.
pub type AsPrefixes = BTreeMap<Asn, Vec<Ipv4Cidr>>;

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub covered: PrefixSet,
    pub fraction_of_ipv4: f64,
    pub fraction_of_announced: f64,
}

/// Shared inputs for coverage queries, with the announced-space denominator
/// computed once.
#[derive(Debug, Clone)]
pub struct CoverageModel<'a> {
    table: &'a MembershipTable,
    as_prefixes: &'a AsPrefixes,
    relationships: Option<&'a AsRelationships>,
    cone: bool,
    announced: u64,
}

impl<'a> CoverageModel<'a> {
    pub fn new(
        table: &'a MembershipTable,
        as_prefixes: &'a AsPrefixes,
        relationships: Option<&'a AsRelationships>,
        cone: bool,
    ) -> Self {
        let announced = PrefixSet::from_cidrs(as_prefixes.values().flatten()).size();
        CoverageModel {
            table,
            as_prefixes,
            relationships,
            cone,
            announced,
        }
    }

    /// ASes reachable through `ixp`: its members, plus their direct customers
    /// when the cone is enabled.
    pub fn reachable_ases(&self, ixp: &str) -> Result<BTreeSet<Asn>, AnalyticsError> {
        let members = self
            .table
            .members(ixp)
            .ok_or_else(|| AnalyticsError::UnknownAnchor(ixp.into()))?;
        let mut ases = members.clone();
        if self.cone {
            if let Some(rel) = self.relationships {
                for m in members {
                    ases.extend(rel.customers(*m));
                }
            }
        }
        Ok(ases)
    }

    pub fn ixp_space(&self, ixp: &str) -> Result<PrefixSet, AnalyticsError> {
        let ases = self.reachable_ases(ixp)?;
        Ok(PrefixSet::from_cidrs(
            ases.iter().filter_map(|a| self.as_prefixes.get(a)).flatten(),
        ))
    }

    pub fn report(&self, covered: PrefixSet) -> CoverageReport {
        let size = covered.size();
        CoverageReport {
            fraction_of_ipv4: size as f64 / IPV4_SPACE as f64,
            fraction_of_announced: if self.announced == 0 {
                0.0
            } else {
                size as f64 / self.announced as f64
            },
            covered,
        }
    }

    pub fn announced_size(&self) -> u64 {
        self.announced
    }
}

pub fn coverage(
    table: &MembershipTable,
    as_prefixes: &AsPrefixes,
    relationships: Option<&AsRelationships>,
    anchors: &[&str],
    cone: bool,
) -> Result<CoverageReport, AnalyticsError> {
    let model = CoverageModel::new(table, as_prefixes, relationships, cone);
    let mut ases = BTreeSet::new();
    for a in anchors {
        ases.extend(model.reachable_ases(a)?);
    }
    let covered = PrefixSet::from_cidrs(ases.iter().filter_map(|a| as_prefixes.get(a)).flatten());
    Ok(model.report(covered))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyStep {
    pub ixp: String,
    /// Newly covered addresses contributed by this pick.
    pub gain: u64,
    pub covered: u64,
    pub fraction_of_ipv4: f64,
    pub fraction_of_announced: f64,
}

/// Picks `k` anchors, each time the IXP with the largest marginal address
/// gain; ties go to the lexicographically smallest IXP id.
pub fn greedy_anchors(
    table: &MembershipTable,
    as_prefixes: &AsPrefixes,
    relationships: Option<&AsRelationships>,
    k: usize,
    cone: bool,
) -> Result<Vec<GreedyStep>, AnalyticsError> {
    let n = table.ixp_count();
    if k == 0 || k > n {
        return Err(AnalyticsError::KOutOfRange { k, max: n });
    }
    let model = CoverageModel::new(table, as_prefixes, relationships, cone);
    let mut spaces: Vec<(&str, PrefixSet)> = Vec::with_capacity(n);
    for (ixp, _) in table.iter() {
        spaces.push((ixp.as_str(), model.ixp_space(ixp)?));
    }
    let mut covered = PrefixSet::new();
    let mut steps = Vec::with_capacity(k);
    for _ in 0..k {
        let base = covered.size();
        let mut best: Option<(usize, u64)> = None;
        // spaces is in lexicographic order, so strict > keeps the smallest id on ties
        for (i, (_, s)) in spaces.iter().enumerate() {
            let gain = covered.union_size(s) - base;
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((i, gain));
            }
        }
        let (i, gain) = best.expect("k <= remaining IXPs");
        let (ixp, space) = spaces.remove(i);
        covered.union_with(&space);
        let r = model.report(covered.clone());
        steps.push(GreedyStep {
            ixp: ixp.into(),
            gain,
            covered: covered.size(),
            fraction_of_ipv4: r.fraction_of_ipv4,
            fraction_of_announced: r.fraction_of_announced,
        });
    }
    Ok(steps)
}
