//! Candidate path generation.
//!
//! Paths run `src endpoint -> anchor IXP -> ... -> anchor IXP -> dst
//! endpoint`; only IXPs may appear in between and no node repeats.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{candidate_order, latency_order, EngineError, Path, Request, SamplerConfig, SamplerMethod};
use crate::graph::{FeasibleView, Multigraph, NodeIdx, NodeKind, PathletId, PathletKind};
use crate::rng::{self, stream};

/// An admitted pathlet seen from one of its ends.
#[derive(Debug, Clone, Copy)]
struct Arc {
    id: PathletId,
    latency: u32,
    to: NodeIdx,
}

/// Search domain: a feasibility view plus the endpoints and any IXPs that
/// may not be entered.
pub(crate) struct Domain<'g> {
    pub view: FeasibleView<'g>,
    pub src: NodeIdx,
    pub dst: NodeIdx,
    pub blocked: Vec<bool>,
    /// Admitted pathlets per node, in incidence order.
    adj: Vec<Vec<Arc>>,
}

impl<'g> Domain<'g> {
    pub fn new(view: FeasibleView<'g>, src: NodeIdx, dst: NodeIdx, blocked_ixps: &BTreeSet<NodeIdx>) -> Self {
        let n = view.graph().node_count();
        let mut blocked = vec![false; n];
        for v in blocked_ixps {
            blocked[v.index()] = true;
        }
        let adj = (0..n as u32)
            .map(|u| {
                view.neighbors(NodeIdx(u))
                    .map(|(p, to)| Arc {
                        id: p.id,
                        latency: p.latency,
                        to,
                    })
                    .collect()
            })
            .collect();
        Domain {
            view,
            src,
            dst,
            blocked,
            adj,
        }
    }

    fn arcs(&self, u: NodeIdx) -> &[Arc] {
        &self.adj[u.index()]
    }

    fn graph(&self) -> &'g Multigraph {
        self.view.graph()
    }

    /// Whether a path may step into `v` as an interior node or as the target.
    fn enterable(&self, v: NodeIdx) -> bool {
        v == self.dst || (self.graph().kind(v) == NodeKind::Ixp && !self.blocked[v.index()])
    }

    /// Minimum-latency route from `from` to `dst` avoiding `extra_blocked`
    /// nodes and pathlets. Among equal-latency routes the one with the
    /// lexicographically smallest pathlet-id sequence wins.
    fn shortest_suffix(
        &self,
        from: NodeIdx,
        extra_nodes: &[NodeIdx],
        extra_pathlets: &BTreeSet<PathletId>,
    ) -> Option<(u64, Vec<PathletId>)> {
        let n = self.graph().node_count();
        let mut off = vec![false; n];
        for v in extra_nodes {
            off[v.index()] = true;
        }
        let usable = |v: NodeIdx| v == from || (self.enterable(v) && !off[v.index()]);
        let admits = |id: PathletId| extra_pathlets.is_empty() || !extra_pathlets.contains(&id);

        // distances to dst, computed backwards
        let mut dist = vec![u64::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[self.dst.index()] = 0;
        heap.push(Reverse((0u64, self.dst.0)));
        while let Some(Reverse((d, u))) = heap.pop() {
            let u = NodeIdx(u);
            if d > dist[u.index()] {
                continue;
            }
            if u == from {
                break;
            }
            if u != self.dst && self.graph().kind(u) != NodeKind::Ixp {
                continue;
            }
            for &Arc { id, latency, to: v } in self.arcs(u) {
                if !admits(id) || !usable(v) {
                    continue;
                }
                let nd = d + u64::from(latency);
                if nd < dist[v.index()] {
                    dist[v.index()] = nd;
                    heap.push(Reverse((nd, v.0)));
                }
            }
        }
        if dist[from.index()] == u64::MAX {
            return None;
        }

        // walk forward along tight edges, smallest pathlet id first
        let mut seq = Vec::new();
        let mut u = from;
        while u != self.dst {
            let du = dist[u.index()];
            let next = self
                .arcs(u)
                .iter()
                .filter(|a| {
                    let v = a.to;
                    admits(a.id)
                        && v != from
                        && (v == self.dst || (usable(v) && self.graph().kind(v) == NodeKind::Ixp))
                        && dist[v.index()] != u64::MAX
                        && dist[v.index()] + u64::from(a.latency) == du
                })
                .min_by_key(|a| a.id)?;
            seq.push(next.id);
            u = next.to;
        }
        Some((dist[from.index()], seq))
    }

    fn path_from(&self, pathlets: Vec<PathletId>) -> Path {
        let total_latency = pathlets
            .iter()
            .map(|id| u64::from(self.graph().pathlet(*id).map_or(0, |p| p.latency)))
            .sum();
        Path {
            pathlets,
            total_latency,
        }
    }

    pub fn min_latency(&self, bound: u64) -> Option<Path> {
        let (lat, seq) = self.shortest_suffix(self.src, &[], &BTreeSet::new())?;
        (lat <= bound).then(|| self.path_from(seq))
    }

    /// Yen's algorithm over pathlet sequences; parallel pathlets are distinct
    /// deviations.
    pub fn k_shortest(&self, bound: u64, k: usize) -> Vec<Path> {
        let mut found: Vec<Path> = Vec::new();
        if k == 0 {
            return found;
        }
        let Some(first) = self.min_latency(bound) else {
            return found;
        };
        found.push(first);
        let mut seen: BTreeSet<Vec<PathletId>> = BTreeSet::new();
        seen.insert(found[0].pathlets.clone());
        let mut pool: BTreeSet<(u64, Vec<PathletId>)> = BTreeSet::new();
        while found.len() < k {
            let prev = found.last().expect("non-empty");
            let nodes = prev.nodes(self.graph(), self.src).expect("found paths chain");
            let mut root_latency = 0u64;
            for i in 0..prev.pathlets.len() {
                let root = &prev.pathlets[..i];
                let removed: BTreeSet<PathletId> = found
                    .iter()
                    .filter(|p| p.pathlets.len() > i && &p.pathlets[..i] == root)
                    .map(|p| p.pathlets[i])
                    .collect();
                if let Some((spur_latency, spur)) = self.shortest_suffix(nodes[i], &nodes[..i], &removed) {
                    let total = root_latency + spur_latency;
                    if total <= bound {
                        let mut seq = root.to_vec();
                        seq.extend(spur);
                        if !seen.contains(&seq) {
                            pool.insert((total, seq));
                        }
                    }
                }
                root_latency += u64::from(self.graph().pathlet(prev.pathlets[i]).map_or(0, |p| p.latency));
            }
            let Some((_, seq)) = pool.pop_first() else {
                break;
            };
            seen.insert(seq.clone());
            found.push(self.path_from(seq));
        }
        found
    }

    pub fn random_walks(&self, bound: u64, walks: u32, max_len: u32, seed: u64) -> Vec<Path> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: BTreeSet<Vec<PathletId>> = BTreeSet::new();
        let mut visited = vec![false; self.graph().node_count()];
        let mut options: Vec<Arc> = Vec::new();
        for _ in 0..walks {
            visited.iter_mut().for_each(|v| *v = false);
            visited[self.src.index()] = true;
            let mut cur = self.src;
            let mut seq = Vec::new();
            let mut latency = 0u64;
            while cur != self.dst && seq.len() < max_len as usize {
                options.clear();
                options.extend(
                    self.arcs(cur)
                        .iter()
                        .filter(|a| !visited[a.to.index()] && self.enterable(a.to)),
                );
                if options.is_empty() {
                    break;
                }
                let a = options[rng.gen_range(0..options.len())];
                seq.push(a.id);
                latency += u64::from(a.latency);
                visited[a.to.index()] = true;
                cur = a.to;
            }
            if cur == self.dst && latency <= bound {
                out.insert(seq);
            }
        }
        let mut paths: Vec<Path> = out.into_iter().map(|s| self.path_from(s)).collect();
        paths.sort_by(candidate_order);
        paths
    }

    /// Every path within `bound`, or `Err(())` once more than `limit` exist.
    pub fn enumerate(&self, bound: u64, limit: usize) -> Result<Vec<Path>, ()> {
        struct Dfs<'a, 'g> {
            dom: &'a Domain<'g>,
            bound: u64,
            limit: usize,
            visited: Vec<bool>,
            seq: Vec<PathletId>,
            out: Vec<Path>,
        }
        impl Dfs<'_, '_> {
            fn go(&mut self, u: NodeIdx, latency: u64) -> Result<(), ()> {
                if u == self.dom.dst {
                    if self.out.len() == self.limit {
                        return Err(());
                    }
                    self.out.push(Path {
                        pathlets: self.seq.clone(),
                        total_latency: latency,
                    });
                    return Ok(());
                }
                let dom = self.dom;
                for &Arc { id, latency: w, to: v } in dom.arcs(u) {
                    let l = latency + u64::from(w);
                    if self.visited[v.index()] || !self.dom.enterable(v) || l > self.bound {
                        continue;
                    }
                    self.visited[v.index()] = true;
                    self.seq.push(id);
                    let r = self.go(v, l);
                    self.seq.pop();
                    self.visited[v.index()] = false;
                    r?;
                }
                Ok(())
            }
        }
        let mut dfs = Dfs {
            dom: self,
            bound,
            limit,
            visited: vec![false; self.graph().node_count()],
            seq: Vec::new(),
            out: Vec::new(),
        };
        dfs.visited[self.src.index()] = true;
        dfs.go(self.src, 0)?;
        dfs.out.sort_by(latency_order);
        Ok(dfs.out)
    }
}

pub(crate) fn resolve_endpoint(graph: &Multigraph, name: &str) -> Result<NodeIdx, EngineError> {
    match graph.node(name) {
        Ok(idx) if graph.kind(idx) == NodeKind::Endpoint => Ok(idx),
        _ => Err(EngineError::UnknownEndpoint(name.into())),
    }
}

fn domain<'g>(
    graph: &'g Multigraph,
    src: &str,
    dst: &str,
    demand: u32,
    excluded: &'g BTreeSet<PathletId>,
) -> Result<Domain<'g>, EngineError> {
    let (s, d) = (resolve_endpoint(graph, src)?, resolve_endpoint(graph, dst)?);
    Ok(Domain::new(graph.feasible_view(demand, excluded), s, d, &BTreeSet::new()))
}

/// Minimum-latency path over the feasible view, or `None` if nothing meets
/// `latency_bound`.
pub fn min_latency_path(
    graph: &Multigraph,
    src: &str,
    dst: &str,
    demand: u32,
    latency_bound: u32,
    excluded: &BTreeSet<PathletId>,
) -> Result<Option<Path>, EngineError> {
    Ok(domain(graph, src, dst, demand, excluded)?.min_latency(latency_bound.into()))
}

/// Up to `k` feasible paths of smallest latency, ordered by latency and then
/// by pathlet-id sequence.
pub fn k_shortest_paths(
    graph: &Multigraph,
    src: &str,
    dst: &str,
    demand: u32,
    latency_bound: u32,
    k: usize,
) -> Result<Vec<Path>, EngineError> {
    let none = BTreeSet::new();
    Ok(domain(graph, src, dst, demand, &none)?.k_shortest(latency_bound.into(), k))
}

/// Distinct successful random walks, in candidate order.
#[allow(clippy::too_many_arguments)]
pub fn random_walk_paths(
    graph: &Multigraph,
    src: &str,
    dst: &str,
    demand: u32,
    latency_bound: u32,
    walks: u32,
    max_len: u32,
    seed: u64,
) -> Result<Vec<Path>, EngineError> {
    let none = BTreeSet::new();
    Ok(domain(graph, src, dst, demand, &none)?.random_walks(latency_bound.into(), walks, max_len, seed))
}

/// All node-simple feasible paths within the bound, sorted by latency.
/// Returns `None` if more than `limit` exist.
pub fn enumerate_paths(
    graph: &Multigraph,
    src: &str,
    dst: &str,
    demand: u32,
    latency_bound: u32,
    limit: usize,
) -> Result<Option<Vec<Path>>, EngineError> {
    let none = BTreeSet::new();
    Ok(domain(graph, src, dst, demand, &none)?
        .enumerate(latency_bound.into(), limit)
        .ok())
}

/// Seed for a random-walk sampling round, split from the sampler seed by
/// request id and call site.
pub(crate) fn walk_seed(config: &SamplerConfig, request: u64, salt: u64) -> u64 {
    rng::derive_seed(config.seed ^ rng::mix64(request) ^ rng::mix64(salt.wrapping_add(0x51)), stream::WALK)
}

pub(crate) fn sample_in(dom: &Domain<'_>, bound: u32, config: &SamplerConfig, walk_seed: u64) -> Vec<Path> {
    let bound = u64::from(bound);
    match config.method {
        SamplerMethod::Dijkstra => dom.min_latency(bound).into_iter().collect(),
        SamplerMethod::Ksp => dom.k_shortest(bound, config.k as usize),
        SamplerMethod::RandomWalk => dom.random_walks(bound, config.walks, config.max_len, walk_seed),
    }
}

/// Stage one of sample-select: candidate paths for `request` on the current
/// residual substrate.
pub fn sample_paths(graph: &Multigraph, request: &Request, config: &SamplerConfig) -> Result<Vec<Path>, EngineError> {
    config.validate()?;
    let none = BTreeSet::new();
    let dom = domain(graph, &request.src, &request.dst, request.demand, &none)?;
    Ok(sample_in(&dom, request.latency_bound, config, walk_seed(config, request.id, 0)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathDefect {
    Empty,
    Broken(usize),
    NotSimple,
    WrongStart,
    WrongEnd,
    ForeignInterior,
    LatencyMismatch,
    OverBound,
    Thin(PathletId),
}

/// Structural soundness of a path; `demand` additionally requires that much
/// residual on every pathlet.
pub fn check_path(
    graph: &Multigraph,
    path: &Path,
    src: &str,
    dst: &str,
    latency_bound: u32,
    demand: Option<u32>,
) -> Result<(), PathDefect> {
    let s = graph.node(src).map_err(|_| PathDefect::WrongStart)?;
    let d = graph.node(dst).map_err(|_| PathDefect::WrongEnd)?;
    if path.pathlets.is_empty() {
        return Err(PathDefect::Empty);
    }
    let mut nodes = vec![s];
    let mut latency = 0u64;
    for (i, id) in path.pathlets.iter().enumerate() {
        let p = graph.pathlet(*id).map_err(|_| PathDefect::Broken(i))?;
        let next = p.other_end(*nodes.last().expect("non-empty")).ok_or(PathDefect::Broken(i))?;
        if let Some(dm) = demand {
            if p.residual() < dm {
                return Err(PathDefect::Thin(p.id));
            }
        }
        let last = i + 1 == path.pathlets.len();
        let kind_ok = if i == 0 || last {
            p.kind == PathletKind::Access
        } else {
            p.kind == PathletKind::Transit
        };
        if !kind_ok {
            return Err(PathDefect::ForeignInterior);
        }
        latency += u64::from(p.latency);
        nodes.push(next);
    }
    if nodes[nodes.len() - 1] != d {
        return Err(PathDefect::WrongEnd);
    }
    if graph.kind(nodes[1]) != NodeKind::Ixp {
        return Err(PathDefect::WrongStart);
    }
    if nodes[1..nodes.len() - 1].iter().any(|n| graph.kind(*n) != NodeKind::Ixp) {
        return Err(PathDefect::ForeignInterior);
    }
    let uniq: BTreeSet<_> = nodes.iter().collect();
    if uniq.len() != nodes.len() {
        return Err(PathDefect::NotSimple);
    }
    if latency != path.total_latency {
        return Err(PathDefect::LatencyMismatch);
    }
    if latency > u64::from(latency_bound) {
        return Err(PathDefect::OverBound);
    }
    Ok(())
}
