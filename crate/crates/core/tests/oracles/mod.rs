//! Brute-force references and random instance generators shared by the
//! integration tests and the acceptance suite. Nothing here calls into the
//! engine, analytics or ingestion code it is used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cxp_core::graph::{Multigraph, NodeKind, PathletId, PathletKind, PathletSpec};
use cxp_core::prefix::Ipv4Cidr;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct InstanceShape {
    pub max_ixps: usize,
    pub max_transit: usize,
    pub max_access: usize,
    pub capacity: (u32, u32),
    pub latency: (u32, u32),
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape {
            max_ixps: 6,
            max_transit: 15,
            max_access: 2,
            capacity: (10, 100),
            latency: (1, 20),
        }
    }
}

/// Random substrate with IXPs `X0..`, endpoints `E1`, `E2`, transit pathlets
/// with ids from 1 and access pathlets with ids from 100.
pub fn random_instance(seed: u64, shape: InstanceShape) -> Multigraph {
    let mut r = rng(seed);
    let n = r.gen_range(2..=shape.max_ixps);
    let mut g = Multigraph::new();
    let ixps: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
    for x in &ixps {
        g.add_ixp(x).unwrap();
    }
    for e in ["E1", "E2"] {
        g.add_endpoint(e, vec![]).unwrap();
    }
    let transit = r.gen_range(1..=shape.max_transit);
    for id in 1..=transit as u64 {
        let a = r.gen_range(0..n);
        let mut b = r.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        g.add_pathlet(&PathletSpec {
            id,
            kind: PathletKind::Transit,
            a: ixps[a].clone(),
            b: ixps[b].clone(),
            asn: r.gen_range(1..=5),
            capacity_mbps: r.gen_range(shape.capacity.0..=shape.capacity.1),
            latency_ms: r.gen_range(shape.latency.0..=shape.latency.1),
        })
        .unwrap();
    }
    let mut next = 100;
    for e in ["E1", "E2"] {
        let k = r.gen_range(1..=shape.max_access.min(n));
        let mut anchors: Vec<usize> = (0..n).collect();
        anchors.shuffle(&mut r);
        for &a in &anchors[..k] {
            g.add_pathlet(&PathletSpec {
                id: next,
                kind: PathletKind::Access,
                a: e.into(),
                b: ixps[a].clone(),
                asn: 9,
                capacity_mbps: r.gen_range(shape.capacity.0..=shape.capacity.1) * 2,
                latency_ms: r.gen_range(1..=3),
            })
            .unwrap();
            next += 1;
        }
    }
    g
}

#[derive(Debug, Clone)]
struct Edge {
    id: PathletId,
    a: String,
    b: String,
    latency: u64,
    residual: u32,
}

fn edges(g: &Multigraph) -> Vec<Edge> {
    g.pathlets()
        .map(|p| Edge {
            id: p.id,
            a: g.name(p.ends[0]).to_string(),
            b: g.name(p.ends[1]).to_string(),
            latency: p.latency.into(),
            residual: p.capacity - p.reserved,
        })
        .collect()
}

/// Every node-simple `src`→`dst` path whose interior nodes are IXPs, whose
/// pathlets all have residual ≥ `demand` and whose latency is ≤ `bound`,
/// sorted by (latency, pathlet ids).
pub fn all_paths(g: &Multigraph, src: &str, dst: &str, demand: u32, bound: u64) -> Vec<(u64, Vec<PathletId>)> {
    let es = edges(g);
    let is_ixp: BTreeMap<String, bool> = g
        .nodes()
        .map(|(_, n)| (n.name.clone(), n.kind == NodeKind::Ixp))
        .collect();
    let mut out = Vec::new();
    let mut seen = vec![src.to_string()];
    let mut seq = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        es: &[Edge],
        is_ixp: &BTreeMap<String, bool>,
        dst: &str,
        demand: u32,
        bound: u64,
        lat: u64,
        seen: &mut Vec<String>,
        seq: &mut Vec<PathletId>,
        out: &mut Vec<(u64, Vec<PathletId>)>,
    ) {
        let here = seen.last().unwrap().clone();
        for e in es {
            let next = if e.a == here {
                &e.b
            } else if e.b == here {
                &e.a
            } else {
                continue;
            };
            if e.residual < demand || lat + e.latency > bound || seen.contains(next) {
                continue;
            }
            seq.push(e.id);
            if next == dst {
                out.push((lat + e.latency, seq.clone()));
            } else if is_ixp[next] {
                seen.push(next.clone());
                dfs(es, is_ixp, dst, demand, bound, lat + e.latency, seen, seq, out);
                seen.pop();
            }
            seq.pop();
        }
    }
    dfs(&es, &is_ixp, dst, demand, bound, 0, &mut seen, &mut seq, &mut out);
    out.sort();
    out
}

/// Node names visited by a pathlet sequence starting at `src`.
pub fn walk_nodes(g: &Multigraph, src: &str, pathlets: &[PathletId]) -> Vec<String> {
    let es: BTreeMap<PathletId, Edge> = edges(g).into_iter().map(|e| (e.id, e)).collect();
    let mut nodes = vec![src.to_string()];
    for id in pathlets {
        let e = &es[id];
        let here = nodes.last().unwrap();
        let next = if &e.a == here { e.b.clone() } else { e.a.clone() };
        nodes.push(next);
    }
    nodes
}

/// Transit pathlets and interior IXPs shared by two paths.
pub fn overlap(g: &Multigraph, src: &str, p: &[PathletId], q: &[PathletId]) -> (usize, usize) {
    let transit = |s: &[PathletId]| -> BTreeSet<PathletId> {
        s.iter()
            .copied()
            .filter(|id| g.pathlet(*id).unwrap().kind == PathletKind::Transit)
            .collect()
    };
    let interior = |s: &[PathletId]| -> BTreeSet<String> {
        let n = walk_nodes(g, src, s);
        if n.len() <= 4 {
            BTreeSet::new()
        } else {
            n[2..n.len() - 2].iter().cloned().collect()
        }
    };
    (
        transit(p).intersection(&transit(q)).count(),
        interior(p).intersection(&interior(q)).count(),
    )
}

/// A concurrent request for the brute-force admission oracle.
#[derive(Debug, Clone)]
pub struct Demand {
    pub src: String,
    pub dst: String,
    pub demand: u32,
    pub bound: u64,
}

/// Largest number of `reqs` embeddable at once, by trying every subset from
/// the largest down and every path assignment for it.
pub fn max_concurrent(g: &Multigraph, reqs: &[Demand]) -> usize {
    let options: Vec<Vec<Vec<PathletId>>> = reqs
        .iter()
        .map(|r| all_paths(g, &r.src, &r.dst, r.demand, r.bound).into_iter().map(|(_, s)| s).collect())
        .collect();
    let residual: BTreeMap<PathletId, u32> = g.pathlets().map(|p| (p.id, p.capacity - p.reserved)).collect();
    let n = reqs.len();
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    for m in masks {
        let chosen: Vec<usize> = (0..n).filter(|i| m & (1 << i) != 0).collect();
        if assign(&chosen, 0, &options, reqs, &mut residual.clone()) {
            return chosen.len();
        }
    }
    0
}

fn assign(
    chosen: &[usize],
    i: usize,
    options: &[Vec<Vec<PathletId>>],
    reqs: &[Demand],
    residual: &mut BTreeMap<PathletId, u32>,
) -> bool {
    if i == chosen.len() {
        return true;
    }
    let r = chosen[i];
    let d = reqs[r].demand;
    for path in &options[r] {
        if path.iter().all(|p| residual[p] >= d) {
            for p in path {
                *residual.get_mut(p).unwrap() -= d;
            }
            let ok = assign(chosen, i + 1, options, reqs, residual);
            for p in path {
                *residual.get_mut(p).unwrap() += d;
            }
            if ok {
                return true;
            }
        }
    }
    false
}

/// Random membership rows over IXPs `I0..` and ASNs `1..=asn_pool`,
/// including duplicates.
pub fn random_rows(seed: u64, max_ixps: usize, asn_pool: u32, max_members: usize) -> Vec<(String, u32)> {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_ixps);
    let mut rows = Vec::new();
    for i in 0..n {
        let m = r.gen_range(1..=max_members);
        for _ in 0..m {
            rows.push((format!("I{i}"), r.gen_range(1..=asn_pool)));
        }
    }
    rows.shuffle(&mut r);
    rows
}

/// Σ over unordered pairs of distinct IXPs of the number of shared ASNs,
/// counted pair by pair from raw rows.
pub fn shared_member_count(rows: &[(String, u32)]) -> BTreeMap<(String, String), usize> {
    let mut names: Vec<&String> = rows.iter().map(|(i, _)| i).collect();
    names.sort();
    names.dedup();
    let mut out = BTreeMap::new();
    for (x, a) in names.iter().enumerate() {
        for b in &names[x + 1..] {
            let mut shared = Vec::new();
            for (i, asn) in rows {
                if i == *a && rows.iter().any(|(j, bsn)| j == *b && bsn == asn) && !shared.contains(asn) {
                    shared.push(*asn);
                }
            }
            if !shared.is_empty() {
                out.insert(((*a).clone(), (*b).clone()), shared.len());
            }
        }
    }
    out
}

/// Address-level coverage: the set of individual IPv4 addresses announced by
/// the given ASes. Only usable with small prefixes.
pub fn addresses(prefixes: &BTreeMap<u32, Vec<Ipv4Cidr>>, ases: &BTreeSet<u32>) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    for a in ases {
        for c in prefixes.get(a).into_iter().flatten() {
            let base = u32::from(c.network());
            for off in 0..c.size() {
                out.insert(base + off as u32);
            }
        }
    }
    out
}

/// Random coverage instance: `n` IXPs `C0..`, ASNs `1..=30` with /22 to /28
/// prefixes inside 10.0.0.0/16, and random provider links.
pub struct CoverageInstance {
    pub rows: Vec<(String, u32)>,
    pub prefixes: BTreeMap<u32, Vec<Ipv4Cidr>>,
    pub customers: Vec<(u32, u32)>,
}

pub fn random_coverage(seed: u64, n: usize) -> CoverageInstance {
    let mut r = rng(seed);
    let mut rows = Vec::new();
    for i in 0..n {
        for _ in 0..r.gen_range(1..=5) {
            rows.push((format!("C{i}"), r.gen_range(1..=30)));
        }
    }
    let mut prefixes: BTreeMap<u32, Vec<Ipv4Cidr>> = BTreeMap::new();
    for asn in 1..=30u32 {
        for _ in 0..r.gen_range(0..=2) {
            let len = r.gen_range(22..=28);
            let addr = (10u32 << 24) | r.gen_range(0..1u32 << 16);
            prefixes.entry(asn).or_default().push(Ipv4Cidr::new(addr.into(), len).unwrap());
        }
    }
    let mut customers = Vec::new();
    for _ in 0..20 {
        let p = r.gen_range(1..=30);
        let c = r.gen_range(1..=30);
        if p != c {
            customers.push((p, c));
        }
    }
    CoverageInstance {
        rows,
        prefixes,
        customers,
    }
}

/// ASes reachable from one IXP, with direct customers when `cone` is set.
pub fn reach(inst: &CoverageInstance, ixp: &str, cone: bool) -> BTreeSet<u32> {
    let mut s: BTreeSet<u32> = inst.rows.iter().filter(|(i, _)| i == ixp).map(|(_, a)| *a).collect();
    if cone {
        let members = s.clone();
        for (p, c) in &inst.customers {
            if members.contains(p) {
                s.insert(*c);
            }
        }
    }
    s
}
