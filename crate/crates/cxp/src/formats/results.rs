//! Simulation outputs: per-request CSV and a JSON summary.

use std::io::{self, Write};

use cxp_core::sim::Metrics;
use serde::Serialize;

pub const REQUESTS_HEADER: [&str; 10] = [
    "request_id",
    "arrival_s",
    "src",
    "dst",
    "demand_mbps",
    "latency_bound_ms",
    "decision",
    "latency_ms",
    "hops",
    "reembeds_triggered",
];

pub fn write_requests_csv<W: Write>(metrics: &Metrics, sink: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(REQUESTS_HEADER)?;
    for r in &metrics.records {
        w.write_record([
            r.request_id.to_string(),
            r.arrival.to_string(),
            r.src.clone(),
            r.dst.clone(),
            r.demand.to_string(),
            r.latency_bound.to_string(),
            r.decision.as_str().to_string(),
            r.latency.map(|l| l.to_string()).unwrap_or_default(),
            r.hops.map(|h| h.to_string()).unwrap_or_default(),
            r.reembeds_triggered.to_string(),
        ])?;
    }
    w.flush()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub accepted: u64,
    pub rejected: u64,
    pub acceptance_ratio: f64,
    pub mean_accepted_latency_ms: f64,
    pub mean_utilization: f64,
    pub reembed_count: u64,
    pub drop_count: u64,
    pub seed: u64,
}

impl Summary {
    pub fn new(m: &Metrics, seed: u64) -> Self {
        Summary {
            accepted: m.accepted,
            rejected: m.rejected,
            acceptance_ratio: m.acceptance_ratio,
            mean_accepted_latency_ms: m.mean_accepted_latency,
            mean_utilization: m.mean_utilization,
            reembed_count: m.reembed_count,
            drop_count: m.drop_count,
            seed,
        }
    }
}

pub fn write_summary_json<W: Write>(summary: &Summary, mut sink: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut sink, summary)?;
    sink.write_all(b"\n")
}
