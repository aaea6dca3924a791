//! Admission control state: the substrate plus every live embedding.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::paths::{resolve_endpoint, sample_in, walk_seed, Domain};
use super::select::rank_paths;
use super::{EngineError, Path, Request, RequestId, SamplerConfig, SamplerMethod, SelectionPolicy};
use crate::graph::{Multigraph, NodeIdx, PathletId};

// walk-seed salts per call site
const SALT_PRIMARY: u64 = 0;
const SALT_BACKUP: u64 = 1;
const SALT_HYBRID: u64 = 2;
const SALT_FAILURE: u64 = 3;

/// An admitted request's reserved path(s).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub request_id: RequestId,
    pub primary: Path,
    /// Disjoint standby path: no shared transit pathlet or interior IXP.
    pub backup: Option<Path>,
    pub demand: u32,
}

impl Embedding {
    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        core::iter::once(&self.primary).chain(self.backup.as_ref())
    }

    pub fn uses(&self, id: PathletId) -> bool {
        self.paths().any(|p| p.pathlets.contains(&id))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admission {
    Accepted(Embedding),
    Rejected,
}

impl Admission {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Admission::Accepted(_))
    }
}

/// A live embedding moved to a different primary path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reembed {
    pub request_id: RequestId,
    pub from: Path,
    pub to: Path,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridOutcome {
    pub admission: Admission,
    pub moved: Vec<Reembed>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FailureReport {
    /// Requests whose affected path was replaced (including backup promotion).
    pub reembedded: Vec<RequestId>,
    /// Requests that lost their primary with no alternative; fully released.
    pub dropped: Vec<RequestId>,
    /// Requests that lost their backup and could not get a new one.
    pub downgraded: Vec<RequestId>,
}

impl FailureReport {
    pub fn is_empty(&self) -> bool {
        self.reembedded.is_empty() && self.dropped.is_empty() && self.downgraded.is_empty()
    }
}

#[derive(Debug, Clone)]
struct Live {
    request: Request,
    embedding: Embedding,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConservationViolation {
    pub pathlet: PathletId,
    pub reserved: u32,
    pub expected: u64,
}

/// Substrate with reservations and the embeddings that own them.
#[derive(Debug, Clone)]
pub struct EngineState {
    graph: Multigraph,
    live: BTreeMap<RequestId, Live>,
}

impl EngineState {
    pub fn new(graph: Multigraph) -> Self {
        EngineState {
            graph,
            live: BTreeMap::new(),
        }
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn embedding(&self, id: RequestId) -> Option<&Embedding> {
        self.live.get(&id).map(|l| &l.embedding)
    }

    pub fn embeddings(&self) -> impl Iterator<Item = &Embedding> {
        self.live.values().map(|l| &l.embedding)
    }

    pub fn live_count(&self) -> usize {
        self.live.len()
    }

    fn check_request(&self, req: &Request) -> Result<(NodeIdx, NodeIdx), EngineError> {
        let src = resolve_endpoint(&self.graph, &req.src)?;
        let dst = resolve_endpoint(&self.graph, &req.dst)?;
        if src == dst {
            return Err(EngineError::SameEndpoints(req.id));
        }
        if req.demand == 0 || req.latency_bound == 0 {
            return Err(EngineError::NonPositiveRequest(req.id));
        }
        if self.live.contains_key(&req.id) {
            return Err(EngineError::DuplicateRequest(req.id));
        }
        Ok((src, dst))
    }

    fn reserve_path(&mut self, path: &Path, demand: u32) -> Result<(), EngineError> {
        for (i, id) in path.pathlets.iter().enumerate() {
            if let Err(e) = self.graph.reserve(*id, demand) {
                for done in &path.pathlets[..i] {
                    self.graph.release(*done, demand)?;
                }
                return Err(e.into());
            }
        }
        Ok(())
    }

    /// Releases every pathlet of `path` that still exists.
    fn release_path(&mut self, path: &Path, demand: u32) -> Result<(), EngineError> {
        for id in &path.pathlets {
            if self.graph.pathlet(*id).is_ok() {
                self.graph.release(*id, demand)?;
            }
        }
        Ok(())
    }

    /// Policy-ranked candidates between `src` and `dst`.
    #[allow(clippy::too_many_arguments)]
    fn candidates(
        &self,
        req: &Request,
        src: NodeIdx,
        excluded: &BTreeSet<PathletId>,
        blocked_ixps: &BTreeSet<NodeIdx>,
        sampler: &SamplerConfig,
        policy: SelectionPolicy,
        salt: u64,
    ) -> Result<Vec<Path>, EngineError> {
        let dst = resolve_endpoint(&self.graph, &req.dst)?;
        let dom = Domain::new(self.graph.feasible_view(req.demand, excluded), src, dst, blocked_ixps);
        let found = sample_in(&dom, req.latency_bound, sampler, walk_seed(sampler, req.id, salt));
        rank_paths(&self.graph, &found, policy)
    }

    fn best_path(
        &self,
        req: &Request,
        src: NodeIdx,
        disjoint_from: Option<&Path>,
        sampler: &SamplerConfig,
        policy: SelectionPolicy,
        salt: u64,
    ) -> Result<Option<Path>, EngineError> {
        let (excluded, blocked) = match disjoint_from {
            Some(p) => (p.transit_pathlets(&self.graph), p.intermediate_ixps(&self.graph, src)),
            None => (BTreeSet::new(), BTreeSet::new()),
        };
        Ok(self
            .candidates(req, src, &excluded, &blocked, sampler, policy, salt)?
            .into_iter()
            .next())
    }

    /// Embeds a checked request or leaves the state untouched.
    fn embed_new(
        &mut self,
        req: &Request,
        src: NodeIdx,
        sampler: &SamplerConfig,
        policy: SelectionPolicy,
    ) -> Result<Admission, EngineError> {
        let Some(primary) = self.best_path(req, src, None, sampler, policy, SALT_PRIMARY)? else {
            return Ok(Admission::Rejected);
        };
        self.reserve_path(&primary, req.demand)?;
        let backup = if req.wants_backup {
            match self.best_path(req, src, Some(&primary), sampler, policy, SALT_BACKUP)? {
                Some(b) => {
                    self.reserve_path(&b, req.demand)?;
                    Some(b)
                }
                None => {
                    self.release_path(&primary, req.demand)?;
                    return Ok(Admission::Rejected);
                }
            }
        } else {
            None
        };
        let embedding = Embedding {
            request_id: req.id,
            primary,
            backup,
            demand: req.demand,
        };
        self.live.insert(
            req.id,
            Live {
                request: req.clone(),
                embedding: embedding.clone(),
            },
        );
        Ok(Admission::Accepted(embedding))
    }

    /// Online admission: sample, select, reserve. Atomic.
    pub fn try_embed(
        &mut self,
        req: &Request,
        sampler: &SamplerConfig,
        policy: SelectionPolicy,
    ) -> Result<Admission, EngineError> {
        sampler.validate()?;
        let (src, _) = self.check_request(req)?;
        self.embed_new(req, src, sampler, policy)
    }

    pub fn release_embedding(&mut self, id: RequestId) -> Result<Embedding, EngineError> {
        let live = self.live.remove(&id).ok_or(EngineError::UnknownEmbedding(id))?;
        let e = live.embedding;
        for p in e.paths() {
            self.release_path(p, e.demand)?;
        }
        Ok(e)
    }

    /// Alternative primaries for a live embedding whose primary is currently
    /// released. Dijkstra sampling alone would only rediscover the current
    /// path, so for that method the candidates are the minimum-latency paths
    /// that avoid one pathlet of the current primary at a time.
    fn alternatives(
        &self,
        live: &Live,
        sampler: &SamplerConfig,
        policy: SelectionPolicy,
    ) -> Result<Vec<Path>, EngineError> {
        let req = &live.request;
        let src = resolve_endpoint(&self.graph, &req.src)?;
        let current = &live.embedding.primary;
        let (base_ex, blocked) = match &live.embedding.backup {
            Some(b) => (b.transit_pathlets(&self.graph), b.intermediate_ixps(&self.graph, src)),
            None => (BTreeSet::new(), BTreeSet::new()),
        };
        let mut found = if sampler.method == SamplerMethod::Dijkstra {
            let mut pool = Vec::new();
            for id in &current.pathlets {
                let mut ex = base_ex.clone();
                ex.insert(*id);
                for p in self.candidates(req, src, &ex, &blocked, sampler, policy, SALT_HYBRID)? {
                    if !pool.contains(&p) {
                        pool.push(p);
                    }
                }
            }
            rank_paths(&self.graph, &pool, policy)?
        } else {
            self.candidates(req, src, &base_ex, &blocked, sampler, policy, SALT_HYBRID)?
        };
        found.retain(|p| p != current);
        Ok(found)
    }

    /// Fallback admission that may move one live embedding to make room.
    ///
    /// Candidates are the live embeddings whose primary holds a pathlet that
    /// currently blocks `req` (residual below its demand) and that releasing
    /// the embedding would unblock; releasing any other embedding cannot make
    /// a new pathlet feasible. They are tried in
    /// ascending `(demand, request id)` order, at most `max_reembeds` of them.
    /// For each, its primary is released and
    /// every alternative primary is tried in policy order; the first
    /// combination under which `req` embeds is committed. Otherwise the state
    /// is restored exactly.
    pub fn hybrid_admit(
        &mut self,
        req: &Request,
        sampler: &SamplerConfig,
        policy: SelectionPolicy,
        max_reembeds: usize,
    ) -> Result<HybridOutcome, EngineError> {
        sampler.validate()?;
        let (src, _) = self.check_request(req)?;
        let rejected = HybridOutcome {
            admission: Admission::Rejected,
            moved: Vec::new(),
        };
        let unblocks = |path: &Path, freed: u32| {
            path.pathlets.iter().any(|id| {
                self.graph
                    .pathlet(*id)
                    .is_ok_and(|p| p.residual() < req.demand && p.residual() + freed >= req.demand)
            })
        };
        let mut order: Vec<(u32, RequestId)> = self
            .live
            .values()
            .filter(|l| unblocks(&l.embedding.primary, l.embedding.demand))
            .map(|l| (l.embedding.demand, l.request.id))
            .collect();
        order.sort_unstable();
        order.truncate(max_reembeds);
        for (demand, victim_id) in order {
            let victim = self.live[&victim_id].clone();
            let current = victim.embedding.primary.clone();
            self.release_path(&current, demand)?;
            for alt in self.alternatives(&victim, sampler, policy)? {
                self.reserve_path(&alt, demand)?;
                if let Admission::Accepted(e) = self.embed_new(req, src, sampler, policy)? {
                    let v = self.live.get_mut(&victim_id).expect("victim is live");
                    v.embedding.primary = alt.clone();
                    return Ok(HybridOutcome {
                        admission: Admission::Accepted(e),
                        moved: alloc::vec![Reembed {
                            request_id: victim_id,
                            from: current,
                            to: alt,
                        }],
                    });
                }
                self.release_path(&alt, demand)?;
            }
            self.reserve_path(&current, demand)?;
        }
        Ok(rejected)
    }

    /// Removes a pathlet and repairs every embedding that used it.
    ///
    /// A broken primary is replaced by its backup when one survives (and a
    /// fresh backup is sought), otherwise re-embedded from scratch or dropped.
    /// A broken backup is replaced if possible and otherwise given up.
    pub fn handle_pathlet_failure(
        &mut self,
        pathlet: PathletId,
        sampler: &SamplerConfig,
        policy: SelectionPolicy,
    ) -> Result<FailureReport, EngineError> {
        sampler.validate()?;
        self.graph.remove_pathlet(pathlet)?;
        let affected: Vec<RequestId> = self
            .live
            .values()
            .filter(|l| l.embedding.uses(pathlet))
            .map(|l| l.request.id)
            .collect();
        let mut report = FailureReport::default();
        for id in affected {
            let Live { request, mut embedding } = self.live.remove(&id).expect("affected is live");
            let src = resolve_endpoint(&self.graph, &request.src)?;
            let demand = embedding.demand;
            let primary_hit = embedding.primary.pathlets.contains(&pathlet);
            let backup_hit = embedding.backup.as_ref().is_some_and(|b| b.pathlets.contains(&pathlet));
            if backup_hit {
                let b = embedding.backup.take().expect("backup hit");
                self.release_path(&b, demand)?;
            }
            if primary_hit {
                self.release_path(&embedding.primary, demand)?;
                if let Some(b) = embedding.backup.take() {
                    embedding.primary = b;
                } else {
                    match self.best_path(&request, src, None, sampler, policy, SALT_FAILURE)? {
                        Some(p) => {
                            self.reserve_path(&p, demand)?;
                            embedding.primary = p;
                        }
                        None => {
                            report.dropped.push(id);
                            continue;
                        }
                    }
                }
                report.reembedded.push(id);
            }
            if request.wants_backup && embedding.backup.is_none() {
                match self.best_path(&request, src, Some(&embedding.primary), sampler, policy, SALT_FAILURE)? {
                    Some(b) => {
                        self.reserve_path(&b, demand)?;
                        embedding.backup = Some(b);
                        if !primary_hit {
                            report.reembedded.push(id);
                        }
                    }
                    None => report.downgraded.push(id),
                }
            }
            self.live.insert(id, Live { request, embedding });
        }
        Ok(report)
    }

    /// Pathlets whose reservation differs from the sum of live demands on it.
    pub fn conservation_violations(&self) -> Vec<ConservationViolation> {
        let mut expected: BTreeMap<PathletId, u64> = BTreeMap::new();
        for l in self.live.values() {
            for p in l.embedding.paths() {
                for id in &p.pathlets {
                    *expected.entry(*id).or_default() += u64::from(l.embedding.demand);
                }
            }
        }
        let mut out = Vec::new();
        for p in self.graph.pathlets() {
            let e = expected.remove(&p.id).unwrap_or(0);
            if u64::from(p.reserved) != e || p.reserved > p.capacity {
                out.push(ConservationViolation {
                    pathlet: p.id,
                    reserved: p.reserved,
                    expected: e,
                });
            }
        }
        // demand recorded on pathlets that no longer exist
        for (id, e) in expected {
            out.push(ConservationViolation {
                pathlet: id,
                reserved: 0,
                expected: e,
            });
        }
        out
    }
}
