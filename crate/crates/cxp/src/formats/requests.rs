//! Oracle request lists: `[{"src", "dst", "demand_mbps", "latency_bound_ms"}]`.

use std::io::Read;

use cxp_core::engine::Request;
use serde::Deserialize;

use crate::DataError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RequestDoc {
    src: String,
    dst: String,
    demand_mbps: u32,
    latency_bound_ms: u32,
}

/// Requests get ids from their position in the array.
pub fn parse_oracle_requests<R: Read>(input: R, source: &str) -> Result<Vec<Request>, DataError> {
    let docs: Vec<RequestDoc> = serde_json::from_reader(input).map_err(|e| {
        let line = (e.line() > 0).then_some(e.line() as u64);
        DataError::new(source, line, e)
    })?;
    Ok(docs
        .into_iter()
        .enumerate()
        .map(|(i, d)| Request::new(i as u64, &d.src, &d.dst, d.demand_mbps, d.latency_bound_ms))
        .collect())
}
