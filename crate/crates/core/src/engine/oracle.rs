//! Exhaustive offline reference: the largest set of requests that can be
//! embedded at the same time, ignoring arrival order and durations.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::paths::{resolve_endpoint, Domain};
use super::{EngineError, Path, Request, RequestId};
use crate::graph::{Multigraph, PathletId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_requests: usize,
    pub max_ixps: usize,
    /// Cap on enumerated candidate paths per request.
    pub max_paths_per_request: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_requests: 8,
            max_ixps: 8,
            max_paths_per_request: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("instance has {got} requests; the oracle accepts at most {max}")]
    TooManyRequests { got: usize, max: usize },
    #[error("instance has {got} IXPs; the oracle accepts at most {max}")]
    TooManyIxps { got: usize, max: usize },
    #[error("request {0} has more than {1} candidate paths")]
    TooManyPaths(RequestId, usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSolution {
    pub accepted: usize,
    /// One optimal assignment, by request id.
    pub witness: Vec<(RequestId, Path)>,
}

struct Search {
    /// Per request (in search order): candidate paths as dense pathlet indices.
    options: Vec<Vec<Vec<usize>>>,
    demands: Vec<u32>,
    residual: Vec<u32>,
    chosen: Vec<Option<usize>>,
    best: usize,
    best_choice: Vec<Option<usize>>,
}

impl Search {
    fn fits(&self, path: &[usize], demand: u32) -> bool {
        path.iter().all(|&i| self.residual[i] >= demand)
    }

    fn go(&mut self, i: usize, accepted: usize) {
        let n = self.options.len();
        if accepted > self.best {
            self.best = accepted;
            self.best_choice = self.chosen.clone();
        }
        if i == n || accepted + (n - i) <= self.best {
            return;
        }
        let demand = self.demands[i];
        for c in 0..self.options[i].len() {
            if !self.fits(&self.options[i][c], demand) {
                continue;
            }
            for &p in &self.options[i][c] {
                self.residual[p] -= demand;
            }
            self.chosen[i] = Some(c);
            self.go(i + 1, accepted + 1);
            self.chosen[i] = None;
            for &p in &self.options[i][c] {
                self.residual[p] += demand;
            }
            if self.best == n {
                return;
            }
        }
        self.go(i + 1, accepted);
    }
}

/// Maximum number of `requests` embeddable simultaneously on `graph`'s
/// current residual capacity, with a witness. Backups are not considered.
pub fn offline_optimal(
    graph: &Multigraph,
    requests: &[Request],
    limits: &OracleLimits,
) -> Result<OracleSolution, OracleError> {
    if requests.len() > limits.max_requests {
        return Err(OracleError::TooManyRequests {
            got: requests.len(),
            max: limits.max_requests,
        });
    }
    let ixps = graph.ixps().count();
    if ixps > limits.max_ixps {
        return Err(OracleError::TooManyIxps {
            got: ixps,
            max: limits.max_ixps,
        });
    }
    let dense: BTreeMap<PathletId, usize> = graph.pathlets().enumerate().map(|(i, p)| (p.id, i)).collect();
    let mut per_request: Vec<(usize, Vec<Path>)> = Vec::new();
    for (idx, r) in requests.iter().enumerate() {
        let src = resolve_endpoint(graph, &r.src)?;
        let dst = resolve_endpoint(graph, &r.dst)?;
        if src == dst {
            return Err(EngineError::SameEndpoints(r.id).into());
        }
        if r.demand == 0 || r.latency_bound == 0 {
            return Err(EngineError::NonPositiveRequest(r.id).into());
        }
        let dom = Domain::new(graph.demand_view(r.demand), src, dst, &Default::default());
        let paths = dom
            .enumerate(r.latency_bound.into(), limits.max_paths_per_request)
            .map_err(|_| OracleError::TooManyPaths(r.id, limits.max_paths_per_request))?;
        if !paths.is_empty() {
            per_request.push((idx, paths));
        }
    }
    // fewest candidates first
    per_request.sort_by_key(|(idx, p)| (p.len(), *idx));
    let n = per_request.len();
    let mut search = Search {
        options: per_request
            .iter()
            .map(|(_, paths)| {
                paths
                    .iter()
                    .map(|p| p.pathlets.iter().map(|id| dense[id]).collect())
                    .collect()
            })
            .collect(),
        demands: per_request.iter().map(|(idx, _)| requests[*idx].demand).collect(),
        residual: graph.pathlets().map(|p| p.residual()).collect(),
        chosen: vec![None; n],
        best: 0,
        best_choice: vec![None; n],
    };
    search.go(0, 0);
    let mut witness: Vec<(RequestId, Path)> = per_request
        .iter()
        .zip(&search.best_choice)
        .filter_map(|((idx, paths), c)| c.map(|c| (requests[*idx].id, paths[c].clone())))
        .collect();
    witness.sort_by_key(|(id, _)| *id);
    Ok(OracleSolution {
        accepted: search.best,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::g1;

    #[test]
    fn g1_optima() {
        let g = g1();
        let lim = OracleLimits::default();
        let three: Vec<Request> = (0..3).map(|i| Request::new(i, "E1", "E2", 40, 25)).collect();
        let sol = offline_optimal(&g, &three, &lim).unwrap();
        assert_eq!(sol.accepted, 2);
        assert_eq!(sol.witness.len(), 2);
        assert_eq!(offline_optimal(&g, &three[..1], &lim).unwrap().accepted, 1);
        let big = [Request::new(0, "E1", "E2", 500, 25)];
        let sol = offline_optimal(&g, &big, &lim).unwrap();
        assert_eq!(sol.accepted, 0);
        assert!(sol.witness.is_empty());
    }

    #[test]
    fn witness_respects_capacity() {
        let g = g1();
        let reqs: Vec<Request> = (0..6).map(|i| Request::new(i, "E1", "E2", 30 + 5 * i as u32, 40)).collect();
        let sol = offline_optimal(&g, &reqs, &OracleLimits::default()).unwrap();
        let mut load: BTreeMap<PathletId, u32> = BTreeMap::new();
        for (id, path) in &sol.witness {
            for p in &path.pathlets {
                *load.entry(*p).or_default() += reqs[*id as usize].demand;
            }
        }
        for (id, l) in load {
            assert!(l <= g.pathlet(id).unwrap().capacity);
        }
        assert_eq!(sol.accepted, sol.witness.len());
    }

    #[test]
    fn size_guard_refuses() {
        let g = g1();
        let reqs: Vec<Request> = (0..9).map(|i| Request::new(i, "E1", "E2", 1, 40)).collect();
        assert_eq!(
            offline_optimal(&g, &reqs, &OracleLimits::default()),
            Err(OracleError::TooManyRequests { got: 9, max: 8 })
        );
        let tight = OracleLimits {
            max_ixps: 2,
            ..Default::default()
        };
        assert!(matches!(
            offline_optimal(&g, &reqs[..1], &tight),
            Err(OracleError::TooManyIxps { .. })
        ));
        let few_paths = OracleLimits {
            max_paths_per_request: 2,
            ..Default::default()
        };
        assert_eq!(
            offline_optimal(&g, &reqs[..1], &few_paths),
            Err(OracleError::TooManyPaths(0, 2))
        );
    }
}
