use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::Rng;

use super::{EndpointWeighting, ScenarioConfig, SimError};
use crate::engine::{Request, RequestId};
use crate::graph::{Multigraph, NodeKind, PathletId, PathletKind};
use crate::ingest::attach_endpoints;
use crate::prefix::PrefixSet;
use crate::rng::{self, stream};

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    Arrival(Request),
    Departure(RequestId),
    Failure(PathletId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    /// Seconds.
    pub time: f64,
    /// Request id for arrivals and departures, sequence number for failures.
    pub id: u64,
    pub kind: EventKind,
}

impl Event {
    pub fn arrival(req: Request) -> Self {
        Event {
            time: req.arrival,
            id: req.id,
            kind: EventKind::Arrival(req),
        }
    }

    pub fn departure(time: f64, id: RequestId) -> Self {
        Event {
            time,
            id,
            kind: EventKind::Departure(id),
        }
    }

    pub fn failure(time: f64, seq: u64, pathlet: PathletId) -> Self {
        Event {
            time,
            id: seq,
            kind: EventKind::Failure(pathlet),
        }
    }

    // departures, then failures, then arrivals
    fn class(&self) -> u8 {
        match self.kind {
            EventKind::Departure(_) => 0,
            EventKind::Failure(_) => 1,
            EventKind::Arrival(_) => 2,
        }
    }

    fn order(&self, other: &Event) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.class().cmp(&other.class()))
            .then(self.id.cmp(&other.id))
    }
}

/// Time-ordered events. Departures always follow their arrival by exactly
/// the request's duration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Workload {
    events: Vec<Event>,
}

impl Workload {
    /// Sorts `events` into processing order and checks their consistency.
    pub fn new(mut events: Vec<Event>) -> Result<Self, SimError> {
        events.sort_by(Event::order);
        let mut arrivals: BTreeMap<RequestId, f64> = BTreeMap::new();
        for e in &events {
            if !(e.time.is_finite() && e.time >= 0.0) {
                return Err(SimError::BadTime);
            }
            match &e.kind {
                EventKind::Arrival(r) => {
                    if !(r.duration.is_finite() && r.duration > 0.0) {
                        return Err(SimError::BadTime);
                    }
                    if arrivals.insert(r.id, r.arrival + r.duration).is_some() {
                        return Err(SimError::DuplicateArrival(r.id));
                    }
                }
                EventKind::Departure(id) => {
                    let due = arrivals.get(id).ok_or(SimError::UnmatchedDeparture(*id))?;
                    if libm::fabs(due - e.time) > 1e-9 {
                        return Err(SimError::DepartureTime(*id));
                    }
                }
                EventKind::Failure(_) => {}
            }
        }
        Ok(Workload { events })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn arrivals(&self) -> impl Iterator<Item = &Request> {
        self.events.iter().filter_map(|e| match &e.kind {
            EventKind::Arrival(r) => Some(r),
            _ => None,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Checks every reference against `graph`.
    pub fn validate_against(&self, graph: &Multigraph) -> Result<(), SimError> {
        let mut failed = BTreeSet::new();
        for e in &self.events {
            match &e.kind {
                EventKind::Arrival(r) => {
                    for name in [&r.src, &r.dst] {
                        match graph.node(name) {
                            Ok(i) if graph.kind(i) == NodeKind::Endpoint => {}
                            _ => return Err(SimError::UnknownEndpoint(name.clone())),
                        }
                    }
                }
                EventKind::Failure(p) => {
                    if graph.pathlet(*p).is_err() {
                        return Err(SimError::UnknownPathlet(*p));
                    }
                    if !failed.insert(*p) {
                        return Err(SimError::DuplicateFailure(*p));
                    }
                }
                EventKind::Departure(_) => {}
            }
        }
        Ok(())
    }
}

/// Attaches the scenario's synthetic endpoints, if any.
pub fn prepare_substrate(mut graph: Multigraph, scenario: &ScenarioConfig) -> Result<Multigraph, SimError> {
    if let Some(synth) = &scenario.endpoints {
        attach_endpoints(&mut graph, synth, scenario.seed)?;
    }
    Ok(graph)
}

fn exponential<R: Rng>(rng: &mut R, rate: f64) -> f64 {
    let u: f64 = rng.gen();
    -libm::log(1.0 - u) / rate
}

/// Poisson request arrivals over `[0, horizon)` plus, when enabled, Poisson
/// failures of distinct uniformly chosen transit pathlets.
///
/// Per arrival the draws are, in order: inter-arrival gap, holding time,
/// demand, latency bound, source, destination, backup flag.
pub fn generate_workload(graph: &Multigraph, scenario: &ScenarioConfig) -> Result<Workload, SimError> {
    scenario.validate()?;
    let endpoints: Vec<_> = graph.endpoints().collect();
    if endpoints.len() < 2 {
        return Err(SimError::TooFewEndpoints(endpoints.len()));
    }
    let weights: Option<WeightedIndex<u64>> = match scenario.endpoint_weighting {
        EndpointWeighting::Uniform => None,
        EndpointWeighting::ByPrefixSize => {
            let w: Vec<u64> = endpoints
                .iter()
                .map(|e| PrefixSet::from_cidrs(&graph.node_info(*e).prefixes).size().max(1))
                .collect();
            Some(WeightedIndex::new(w).map_err(|_| SimError::Config("endpoint weights"))?)
        }
    };

    let mut rng = rng::stream_rng(scenario.seed, stream::WORKLOAD);
    let mut events = Vec::new();
    let mut t = 0.0;
    let mut next_id: RequestId = 0;
    loop {
        t += exponential(&mut rng, scenario.arrival_rate);
        if t >= scenario.horizon {
            break;
        }
        let duration = libm::ceil(exponential(&mut rng, 1.0 / scenario.mean_duration)).max(1.0);
        let demand = scenario.demand.sample(&mut rng);
        let latency_bound = scenario.latency_bound.sample(&mut rng);
        let (src, dst) = match &weights {
            None => {
                let s = rng.gen_range(0..endpoints.len());
                let mut d = rng.gen_range(0..endpoints.len() - 1);
                if d >= s {
                    d += 1;
                }
                (s, d)
            }
            Some(w) => {
                let s = w.sample(&mut rng);
                let mut d = w.sample(&mut rng);
                while d == s {
                    d = w.sample(&mut rng);
                }
                (s, d)
            }
        };
        let wants_backup = rng.gen_bool(scenario.backup_probability);
        let req = Request {
            id: next_id,
            src: graph.name(endpoints[src]).into(),
            dst: graph.name(endpoints[dst]).into(),
            demand,
            latency_bound,
            arrival: t,
            duration,
            wants_backup,
        };
        events.push(Event::departure(t + duration, next_id));
        events.push(Event::arrival(req));
        next_id += 1;
    }

    if scenario.failure_rate > 0.0 {
        let mut frng = rng::stream_rng(scenario.seed, stream::FAILURE);
        let mut pool: Vec<PathletId> = graph
            .pathlets()
            .filter(|p| p.kind == PathletKind::Transit)
            .map(|p| p.id)
            .collect();
        let mut t = 0.0;
        let mut seq = 0;
        while !pool.is_empty() {
            t += exponential(&mut frng, scenario.failure_rate);
            if t >= scenario.horizon {
                break;
            }
            let victim = pool.remove(frng.gen_range(0..pool.len()));
            events.push(Event::failure(t, seq, victim));
            seq += 1;
        }
    }
    Workload::new(events).map_err(|e| match e {
        SimError::BadTime => SimError::Config("generated event time overflow"),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::g1;

    fn scenario() -> ScenarioConfig {
        ScenarioConfig {
            endpoints: None,
            ..Default::default()
        }
    }

    #[test]
    fn zero_horizon_is_empty() {
        let s = ScenarioConfig {
            horizon: 0.0,
            ..scenario()
        };
        assert!(generate_workload(&g1(), &s).unwrap().is_empty());
    }

    #[test]
    fn deterministic_and_well_formed() {
        let s = ScenarioConfig {
            failure_rate: 0.05,
            backup_probability: 0.3,
            ..scenario()
        };
        let w = generate_workload(&g1(), &s).unwrap();
        assert_eq!(w, generate_workload(&g1(), &s).unwrap());
        assert!(w.arrivals().count() > 100);
        assert!(w.events().windows(2).all(|p| p[0].time <= p[1].time));
        for r in w.arrivals() {
            assert_ne!(r.src, r.dst);
            assert!((10..=100).contains(&r.demand));
            assert!((30..=150).contains(&r.latency_bound));
            assert!(r.duration >= 1.0 && r.duration.fract() == 0.0);
        }
        let fails = w
            .events()
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Failure(_)))
            .count();
        assert!(fails <= 4);
        w.validate_against(&g1()).unwrap();

        let other = generate_workload(&g1(), &ScenarioConfig { seed: 2, ..s }).unwrap();
        assert_ne!(w, other);
    }

    #[test]
    fn interarrival_mean() {
        let s = ScenarioConfig {
            arrival_rate: 2.0,
            horizon: 5000.5,
            ..scenario()
        };
        let w = generate_workload(&g1(), &s).unwrap();
        let times: Vec<f64> = w.arrivals().map(|r| r.arrival).collect();
        assert!(times.len() >= 9_000);
        let mean = times.last().unwrap() / times.len() as f64;
        assert!((mean - 0.5).abs() < 0.025, "mean inter-arrival {mean}");
    }

    #[test]
    fn prefix_weighting_prefers_large_endpoints() {
        let mut g = g1();
        // E3 announces a /8, far larger than E1/E2's /16s
        g.add_endpoint("E3", alloc::vec!["20.0.0.0/8".parse().unwrap()]).unwrap();
        g.add_pathlet(&crate::PathletSpec {
            id: 30,
            kind: PathletKind::Access,
            a: "E3".into(),
            b: "X2".into(),
            asn: 1,
            capacity_mbps: 10,
            latency_ms: 1,
        })
        .unwrap();
        let s = ScenarioConfig {
            endpoint_weighting: EndpointWeighting::ByPrefixSize,
            ..scenario()
        };
        let w = generate_workload(&g, &s).unwrap();
        let n = w.arrivals().count();
        let with_e3 = w.arrivals().filter(|r| r.src == "E3" || r.dst == "E3").count();
        assert!(with_e3 * 100 >= n * 95, "{with_e3} of {n}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let lone = {
            let mut h = Multigraph::new();
            h.add_ixp("X").unwrap();
            h
        };
        assert_eq!(generate_workload(&lone, &scenario()), Err(SimError::TooFewEndpoints(0)));
        let bad = ScenarioConfig {
            arrival_rate: 0.0,
            ..scenario()
        };
        assert!(matches!(generate_workload(&g1(), &bad), Err(SimError::Config(_))));

        let r = Request::new(1, "E1", "E2", 1, 1);
        assert_eq!(
            Workload::new(alloc::vec![Event::departure(1.0, 1)]),
            Err(SimError::UnmatchedDeparture(1))
        );
        assert_eq!(
            Workload::new(alloc::vec![Event::arrival(r.clone()), Event::departure(3.0, 1)]),
            Err(SimError::DepartureTime(1))
        );
        let w = Workload::new(alloc::vec![Event::failure(0.5, 0, 99)]).unwrap();
        assert_eq!(w.validate_against(&g1()), Err(SimError::UnknownPathlet(99)));
        let mut r9 = r;
        r9.dst = "E9".into();
        let w = Workload::new(alloc::vec![Event::arrival(r9)]).unwrap();
        assert_eq!(w.validate_against(&g1()), Err(SimError::UnknownEndpoint("E9".into())));
    }
}
