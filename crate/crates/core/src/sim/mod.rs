//! Discrete-event admission simulation.
//!
//! [`generate_workload`] turns a [`ScenarioConfig`] into a timestamped event
//! list (Poisson arrivals, exponential holding times, optional pathlet
//! failures) and [`run_simulation`] replays it against an [`EngineState`],
//! checking reservation conservation after every event.
//!
//! [`EngineState`]: crate::engine::EngineState

mod harness;
mod scenario;
mod workload;

pub use harness::{run_simulation, simulate, Decision, LogEntry, LogEvent, Metrics, RequestRecord, SimOutcome};
pub use scenario::{EndpointWeighting, HybridConfig, ScenarioConfig};
pub use workload::{generate_workload, prepare_substrate, Event, EventKind, Workload};

use alloc::string::String;

use crate::engine::{EngineError, RequestId};
use crate::graph::PathletId;
use crate::ingest::IngestError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    Config(&'static str),
    #[error("workload needs at least 2 endpoints, graph has {0}")]
    TooFewEndpoints(usize),
    #[error("event times must be finite and non-negative")]
    BadTime,
    #[error("request {0} appears twice")]
    DuplicateArrival(RequestId),
    #[error("departure of request {0} has no prior arrival")]
    UnmatchedDeparture(RequestId),
    #[error("departure of request {0} does not match arrival + duration")]
    DepartureTime(RequestId),
    #[error("workload references unknown endpoint {0:?}")]
    UnknownEndpoint(String),
    #[error("workload references unknown pathlet {0}")]
    UnknownPathlet(PathletId),
    #[error("pathlet {0} fails more than once")]
    DuplicateFailure(PathletId),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
}
