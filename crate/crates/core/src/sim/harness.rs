use alloc::string::String;
use alloc::vec::Vec;

use super::{generate_workload, prepare_substrate, EventKind, ScenarioConfig, SimError, Workload};
use crate::engine::{Admission, EngineState, RequestId, SamplerConfig};
use crate::graph::{Multigraph, PathletId, PathletKind};
use crate::rng::{self, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RequestRecord {
    pub request_id: RequestId,
    pub arrival: f64,
    pub src: String,
    pub dst: String,
    pub demand: u32,
    pub latency_bound: u32,
    pub decision: Decision,
    /// Primary path latency at admission.
    pub latency: Option<u64>,
    pub hops: Option<usize>,
    /// Live embeddings moved to admit this request.
    pub reembeds_triggered: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub accepted: u64,
    pub rejected: u64,
    pub acceptance_ratio: f64,
    /// ms, over accepted requests' primary paths at admission.
    pub mean_accepted_latency: f64,
    /// Time average of Σ reserved / Σ capacity over transit pathlets.
    pub mean_utilization: f64,
    /// Hybrid moves plus failure-driven re-embeddings.
    pub reembed_count: u64,
    /// Embeddings dropped after a failure.
    pub drop_count: u64,
    pub records: Vec<RequestRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LogEvent {
    Arrival { request: RequestId, accepted: bool, moved: u32 },
    Departure { request: RequestId, released: bool },
    Failure { pathlet: PathletId, reembedded: u32, dropped: u32, downgraded: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry {
    pub time: f64,
    pub event: LogEvent,
    /// Pathlets whose reservation disagreed with live demand after this event.
    pub violations: u32,
}

#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub metrics: Metrics,
    pub log: Vec<LogEntry>,
    /// Total conservation violations over all events.
    pub conservation_violations: u64,
    /// Engine state after the last event.
    pub final_state: EngineState,
}

fn transit_load(graph: &Multigraph) -> f64 {
    let (mut reserved, mut capacity) = (0u64, 0u64);
    for p in graph.pathlets().filter(|p| p.kind == PathletKind::Transit) {
        reserved += u64::from(p.reserved);
        capacity += u64::from(p.capacity);
    }
    if capacity == 0 {
        0.0
    } else {
        reserved as f64 / capacity as f64
    }
}

/// Replays `workload` on `graph`.
///
/// Arrivals go through online admission and, when enabled and rejected, the
/// hybrid fallback. Departures release live embeddings (and are ignored for
/// rejected or dropped requests). Failures remove a pathlet and repair the
/// embeddings on it. Random walks draw from the scenario seed.
pub fn run_simulation(graph: Multigraph, workload: &Workload, scenario: &ScenarioConfig) -> Result<SimOutcome, SimError> {
    scenario.validate()?;
    workload.validate_against(&graph)?;
    let sampler = SamplerConfig {
        seed: scenario.sampler.seed ^ rng::derive_seed(scenario.seed, stream::WALK),
        ..scenario.sampler
    };
    let policy = scenario.policy;
    let mut state = EngineState::new(graph);

    let mut records = Vec::new();
    let mut log = Vec::with_capacity(workload.events().len());
    let (mut reembeds, mut drops, mut violations) = (0u64, 0u64, 0u64);
    let (mut accepted_latency, mut accepted) = (0u64, 0u64);
    let (mut area, mut last_t, mut load) = (0.0f64, 0.0f64, 0.0f64);

    for e in workload.events() {
        area += (e.time - last_t) * load;
        last_t = e.time;
        let event = match &e.kind {
            EventKind::Arrival(req) => {
                let mut admission = state.try_embed(req, &sampler, policy)?;
                let mut moved = 0;
                if admission == Admission::Rejected && scenario.hybrid.enabled {
                    let out = state.hybrid_admit(req, &sampler, policy, scenario.hybrid.max_reembeds as usize)?;
                    moved = out.moved.len() as u32;
                    admission = out.admission;
                }
                reembeds += u64::from(moved);
                let (decision, latency, hops) = match &admission {
                    Admission::Accepted(emb) => {
                        accepted += 1;
                        accepted_latency += emb.primary.total_latency;
                        (Decision::Accept, Some(emb.primary.total_latency), Some(emb.primary.hops()))
                    }
                    Admission::Rejected => (Decision::Reject, None, None),
                };
                records.push(RequestRecord {
                    request_id: req.id,
                    arrival: req.arrival,
                    src: req.src.clone(),
                    dst: req.dst.clone(),
                    demand: req.demand,
                    latency_bound: req.latency_bound,
                    decision,
                    latency,
                    hops,
                    reembeds_triggered: moved,
                });
                LogEvent::Arrival {
                    request: req.id,
                    accepted: decision == Decision::Accept,
                    moved,
                }
            }
            EventKind::Departure(id) => {
                let released = state.embedding(*id).is_some();
                if released {
                    state.release_embedding(*id)?;
                }
                LogEvent::Departure { request: *id, released }
            }
            EventKind::Failure(p) => {
                let rep = state.handle_pathlet_failure(*p, &sampler, policy)?;
                reembeds += rep.reembedded.len() as u64;
                drops += rep.dropped.len() as u64;
                LogEvent::Failure {
                    pathlet: *p,
                    reembedded: rep.reembedded.len() as u32,
                    dropped: rep.dropped.len() as u32,
                    downgraded: rep.downgraded.len() as u32,
                }
            }
        };
        let v = state.conservation_violations().len() as u32;
        violations += u64::from(v);
        load = transit_load(state.graph());
        log.push(LogEntry {
            time: e.time,
            event,
            violations: v,
        });
    }

    let total = records.len() as u64;
    let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let metrics = Metrics {
        accepted,
        rejected: total - accepted,
        acceptance_ratio: ratio(accepted, total),
        mean_accepted_latency: ratio(accepted_latency, accepted),
        mean_utilization: if last_t > 0.0 { area / last_t } else { 0.0 },
        reembed_count: reembeds,
        drop_count: drops,
        records,
    };
    Ok(SimOutcome {
        metrics,
        log,
        conservation_violations: violations,
        final_state: state,
    })
}

/// Attaches scenario endpoints, generates the workload and runs it.
pub fn simulate(graph: Multigraph, scenario: &ScenarioConfig) -> Result<SimOutcome, SimError> {
    let graph = prepare_substrate(graph, scenario)?;
    let workload = generate_workload(&graph, scenario)?;
    run_simulation(graph, &workload, scenario)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Request, SelectionPolicy};
    use crate::fixtures::{g1, P3};
    use crate::sim::{Event, HybridConfig};
    use alloc::vec;

    fn scripted(hybrid: bool) -> (Workload, ScenarioConfig) {
        let mut r1 = Request::new(1, "E1", "E2", 40, 40);
        r1.duration = 10.0;
        let mut r2 = Request::new(2, "E1", "E2", 70, 25);
        r2.arrival = 1.0;
        r2.duration = 100.0;
        let w = Workload::new(vec![
            Event::arrival(r1),
            Event::arrival(r2),
            Event::departure(10.0, 1),
        ])
        .unwrap();
        let s = ScenarioConfig {
            sampler: SamplerConfig::ksp(10),
            policy: SelectionPolicy::MinLatency,
            hybrid: HybridConfig {
                enabled: hybrid,
                max_reembeds: 4,
            },
            endpoints: None,
            ..Default::default()
        };
        (w, s)
    }

    #[test]
    fn hybrid_replay() {
        let (w, s) = scripted(true);
        let out = run_simulation(g1(), &w, &s).unwrap();
        assert_eq!((out.metrics.accepted, out.metrics.rejected), (2, 0));
        assert_eq!(out.metrics.reembed_count, 1);
        assert_eq!(out.metrics.acceptance_ratio, 1.0);
        assert_eq!(out.metrics.records[1].reembeds_triggered, 1);
        assert_eq!(out.conservation_violations, 0);

        let (w, s) = scripted(false);
        let out = run_simulation(g1(), &w, &s).unwrap();
        assert_eq!((out.metrics.accepted, out.metrics.rejected), (1, 1));
        assert_eq!(out.metrics.acceptance_ratio, 0.5);
        assert_eq!(out.metrics.records[1].decision, Decision::Reject);
        assert_eq!(out.metrics.records[1].latency, None);
        // r1 departed, nothing left reserved
        assert!(out.final_state.graph().pathlets().all(|p| p.reserved == 0));
    }

    #[test]
    fn utilization_integral() {
        // r1 holds 40 on p2 (cap 50) and p3 (cap 100) for [0, 10); transit capacity 300
        let (w, mut s) = scripted(false);
        s.hybrid.enabled = false;
        let out = run_simulation(g1(), &w, &s).unwrap();
        assert!((out.metrics.mean_utilization - 80.0 / 300.0).abs() < 1e-12);
        assert_eq!(out.metrics.mean_accepted_latency, 17.0);
    }

    #[test]
    fn empty_workload() {
        let out = run_simulation(g1(), &Workload::default(), &ScenarioConfig::default()).unwrap();
        let m = out.metrics;
        assert_eq!((m.accepted, m.rejected, m.reembed_count, m.drop_count), (0, 0, 0, 0));
        assert_eq!((m.acceptance_ratio, m.mean_utilization), (0.0, 0.0));
    }

    #[test]
    fn failure_event_drops() {
        let mut r1 = Request::new(1, "E1", "E2", 40, 25);
        r1.duration = 10.0;
        let w = Workload::new(vec![
            Event::arrival(r1),
            Event::failure(2.0, 0, P3),
            Event::departure(10.0, 1),
        ])
        .unwrap();
        let out = run_simulation(g1(), &w, &scripted(false).1).unwrap();
        assert_eq!(out.metrics.drop_count, 1);
        assert_eq!(out.conservation_violations, 0);
        assert_eq!(
            out.log[2].event,
            LogEvent::Departure {
                request: 1,
                released: false
            }
        );
    }

    #[test]
    fn default_scenario_runs_clean() {
        let t: crate::ingest::MembershipTable = (0..12u32)
            .flat_map(|i| (1..=30u32).filter(move |a| (a * 7 + i) % 3 == 0).map(move |a| (alloc::format!("IX{i:02}"), a)))
            .collect();
        let g = crate::ingest::build_multigraph(&t, &Default::default()).unwrap();
        let s = ScenarioConfig {
            failure_rate: 0.02,
            backup_probability: 0.2,
            ..Default::default()
        };
        let a = simulate(g.clone(), &s).unwrap();
        assert_eq!(a.conservation_violations, 0);
        assert!(a.metrics.accepted > 0);
        let b = simulate(g, &s).unwrap();
        assert_eq!(a.metrics, b.metrics);
    }
}
