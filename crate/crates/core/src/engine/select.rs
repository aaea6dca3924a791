//! Stage two of sample-select: ranking candidates by policy.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;

use super::{candidate_order, EngineError, Path, SelectionPolicy};
use crate::graph::{GraphError, Multigraph};

/// Σ 1/residual as an exact fraction `(numerator, denominator)`. The common
/// factor `demand` cancels in comparisons.
fn stress(residuals: &[u32]) -> (BigUint, BigUint) {
    let mut num = BigUint::from(0u32);
    let mut den = BigUint::from(1u32);
    for &r in residuals {
        // zero residual cannot occur for feasible candidates; treat as huge stress
        let r = BigUint::from(r.max(1));
        num = num * &r + &den;
        den *= r;
    }
    (num, den)
}

struct Scored<'a> {
    path: &'a Path,
    bottleneck: u32,
    stress: (BigUint, BigUint),
}

fn score<'a>(graph: &Multigraph, path: &'a Path, policy: SelectionPolicy) -> Result<Scored<'a>, GraphError> {
    let residuals = path
        .pathlets
        .iter()
        .map(|id| graph.pathlet(*id).map(|p| p.residual()))
        .collect::<Result<Vec<u32>, _>>()?;
    let stress = if policy == SelectionPolicy::LeastStress {
        stress(&residuals)
    } else {
        (BigUint::from(0u32), BigUint::from(1u32))
    };
    Ok(Scored {
        path,
        bottleneck: residuals.iter().copied().min().unwrap_or(0),
        stress,
    })
}

fn compare(a: &Scored<'_>, b: &Scored<'_>, policy: SelectionPolicy) -> Ordering {
    let primary = match policy {
        SelectionPolicy::MinLatency => Ordering::Equal,
        SelectionPolicy::MinHops => a.path.hops().cmp(&b.path.hops()),
        SelectionPolicy::Widest => b.bottleneck.cmp(&a.bottleneck),
        SelectionPolicy::LeastStress => (&a.stress.0 * &b.stress.1).cmp(&(&b.stress.0 * &a.stress.1)),
    };
    primary.then_with(|| candidate_order(a.path, b.path))
}

/// Candidates sorted best-first under `policy`, using current residuals.
pub fn rank_paths(graph: &Multigraph, candidates: &[Path], policy: SelectionPolicy) -> Result<Vec<Path>, EngineError> {
    let mut scored = candidates
        .iter()
        .map(|p| score(graph, p, policy))
        .collect::<Result<Vec<_>, _>>()?;
    scored.sort_by(|a, b| compare(a, b, policy));
    Ok(scored.into_iter().map(|s| s.path.clone()).collect())
}

/// The best candidate under `policy`; ties fall back to latency, hop count
/// and pathlet-id sequence. `demand` scales every stress term equally and so
/// never changes the ranking.
pub fn select_path(
    graph: &Multigraph,
    candidates: &[Path],
    policy: SelectionPolicy,
    _demand: u32,
) -> Result<Path, EngineError> {
    let mut best: Option<Scored<'_>> = None;
    for c in candidates {
        let s = score(graph, c, policy)?;
        if best.as_ref().is_none_or(|b| compare(&s, b, policy) == Ordering::Less) {
            best = Some(s);
        }
    }
    best.map(|b| b.path.clone()).ok_or(EngineError::EmptyCandidates)
}
